#include "rftrack/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace rftrack {

double potential_energy(const TaskVec& Y, const TaskMat& K1) { return 0.5 * Y.dot(K1 * Y); }

Vec potential_gradient(const Vec& theta, const TaskVec& Xd, const ArmModel& model, const TaskMat& K1)
{
    const TaskVec Y = forward_kinematics(theta, model) - Xd;
    return jacobian(theta, model).transpose() * (K1 * Y);
}

LyapunovSample lyapunov_value(const JointState& s, const TaskTarget& target, const ArmModel& model,
                              const ControllerGains& gains, const EnvironmentModel& env, double P0)
{
    LyapunovSample out;
    out.T = kinetic_energy(s, model);
    const TaskVec Y = forward_kinematics(s.theta, model) - target.Xd;
    out.P = potential_energy(Y, gains.k1(env));
    out.V = out.T + out.P - P0;
    return out;
}

double dissipation_rate(const TaskVec& Y_dot, double sigma, const ControllerGains& gains)
{
    const double robust = gains.K * sigma * switching(sigma, gains.sign_mode);
    return -Y_dot.dot(gains.k2() * Y_dot) - Y_dot.squaredNorm() * robust;
}

double lyapunov_rate_rhs(const JointState& s, const TaskTarget& target, const ArmModel& model,
                         const ControllerGains& gains)
{
    check_dimensions(s, model);
    const TaskJacobian J = jacobian(s.theta, model);
    const TaskVec Y = forward_kinematics(s.theta, model) - target.Xd;
    const TaskVec Y_dot = J * s.theta_dot - target.Xd_dot;
    // e = -Y, e_dot = -Y_dot
    return dissipation_rate(Y_dot, sigma(-Y, -Y_dot, gains), gains);
}

std::vector<RatePoint> lyapunov_rate_comparison(const Trace& trace, Stencil stencil)
{
    std::vector<RatePoint> out;
    const auto& rows = trace.rows;
    const std::size_t reach = stencil == Stencil::five_point ? 2 : 1;
    if (rows.size() < 2 * reach + 1) return out;
    out.reserve(rows.size() - 2 * reach);
    for (std::size_t i = reach; i + reach < rows.size(); ++i) {
        // Spacing is uniform except around a truncated final step.
        const double h = rows[i + 1].t - rows[i].t;
        bool uniform = true;
        for (std::size_t j = i - reach; j < i + reach; ++j)
            uniform = uniform && std::abs((rows[j + 1].t - rows[j].t) - h) <= 1e-9 * h;
        if (!uniform) continue;
        RatePoint p;
        p.t = rows[i].t;
        if (stencil == Stencil::five_point)
            p.dV_fd = (rows[i - 2].V - 8.0 * rows[i - 1].V + 8.0 * rows[i + 1].V - rows[i + 2].V) / (12.0 * h);
        else
            p.dV_fd = (rows[i + 1].V - rows[i - 1].V) / (2.0 * h);
        p.dV_rhs = rows[i].dV_rhs;
        p.sigma = rows[i].sigma;
        // A sign change across the stencil marks the point as a sigma crossing.
        if (rows[i - reach].sigma * rows[i + reach].sigma <= 0.0) p.sigma = 0.0;
        out.push_back(p);
    }
    return out;
}

RateAgreement rate_agreement(const std::vector<RatePoint>& points, double floor, double sigma_exclusion)
{
    RateAgreement r;
    for (const auto& p : points) {
        if (std::abs(p.dV_rhs) <= floor) {
            ++r.skipped;
            continue;
        }
        if (sigma_exclusion > 0.0 && std::abs(p.sigma) <= sigma_exclusion) {
            ++r.skipped;
            continue;
        }
        const double rel = std::abs(p.dV_fd - p.dV_rhs) / std::max(std::abs(p.dV_rhs), floor);
        ++r.compared;
        if (rel > r.worst_relative_error) {
            r.worst_relative_error = rel;
            r.worst_time = p.t;
        }
    }
    return r;
}

MonotonicityResult check_monotone(const Trace& trace, double tol, double band_fraction)
{
    MonotonicityResult r;
    const auto& rows = trace.rows;
    if (rows.empty()) throw ContractViolation("monotonicity check needs a nonempty trace");
    r.V_initial = rows.front().V;
    r.V_final = rows.back().V;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double rise = rows[i].V - rows[i - 1].V;
        if (rise > r.worst_increase) {
            r.worst_increase = rise;
            r.worst_time = rows[i].t;
        }
        if (rise > tol) r.non_increasing = false;
    }
    r.reached_band = r.V_final <= band_fraction * r.V_initial;
    return r;
}

TrackingMetrics tracking_metrics(const Trace& trace, const MetricsOptions& opts)
{
    const auto& rows = trace.rows;
    if (rows.empty()) throw ContractViolation("tracking metrics need a nonempty trace");
    TrackingMetrics m;
    double sum_sq = 0.0;
    int count = 0;
    for (const auto& r : rows) {
        if (r.t < opts.window_start) continue;
        const double err = (r.X - r.Xd).norm();
        m.max_error = std::max(m.max_error, err);
        sum_sq += err * err;
        ++count;
    }
    if (count > 0) m.rms_error = std::sqrt(sum_sq / count);
    m.final_error = (rows.back().X - rows.back().Xd).norm();

    for (std::size_t i = 0; i < rows.size(); ++i) {
        m.max_torque = std::max(m.max_torque, rows[i].U.cwiseAbs().maxCoeff());
        if (i > 0) m.torque_variation += (rows[i].U - rows[i - 1].U).cwiseAbs().sum();
    }

    // Walk backwards to the last row outside the band.
    std::optional<double> settle;
    for (std::size_t i = rows.size(); i-- > 0;) {
        if ((rows[i].X - rows[i].Xd).norm() >= opts.settling_band) break;
        settle = rows[i].t;
    }
    m.settling_time = settle;
    return m;
}

}  // namespace rftrack
