#include "rftrack/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rftrack/analysis.hpp"

namespace rftrack {

namespace {

double link_kinetic_energy(const Vec& theta, const Vec& theta_dot, const ArmModel& model)
{
    double T = 0.0;
    double phi = 0.0, omega = 0.0;
    TaskVec v_joint = TaskVec::Zero();
    for (int i = 0; i < model.dof(); ++i) {
        phi += theta[i];
        omega += theta_dot[i];
        const TaskVec perp(-std::sin(phi), std::cos(phi));
        const TaskVec v_com = v_joint + omega * model.com_offsets[i] * perp;
        T += 0.5 * model.link_masses[i] * v_com.squaredNorm() + 0.5 * model.link_inertias[i] * omega * omega;
        v_joint += omega * model.link_lengths[i] * perp;
    }
    return T;
}

Mat polarized_inertia(const Vec& theta, const ArmModel& model)
{
    const int n = model.dof();
    Mat M(n, n);
    auto T = [&](const Vec& v) { return link_kinetic_energy(theta, v, model); };
    for (int j = 0; j < n; ++j) M(j, j) = 2.0 * T(Vec::Unit(n, j));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            M(j, k) = M(k, j) = T(Vec::Unit(n, j) + Vec::Unit(n, k)) - 0.5 * M(j, j) - 0.5 * M(k, k);
    return M;
}

double rel_err(const Mat& a, const Mat& b, double floor = 1e-12)
{
    return (a - b).norm() / std::max(b.norm(), floor);
}

std::vector<JointState> random_states(const ArmModel& model, const VerifyOptions& opts)
{
    std::mt19937_64 rng(opts.seed);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<JointState> out;
    for (int i = 0; i < opts.random_states; ++i) {
        JointState s{Vec(model.dof()), Vec(model.dof())};
        for (int k = 0; k < model.dof(); ++k) {
            s.theta[k] = std::numbers::pi * (2.0 * u() - 1.0);
            s.theta_dot[k] = 2.0 * (2.0 * u() - 1.0);
        }
        out.push_back(std::move(s));
    }
    return out;
}

CheckResult make(std::string name, double value, double tol, std::string detail = {})
{
    return {std::move(name), value, tol, value < tol, std::move(detail)};
}

}  // namespace

NumericalDynamics numerical_dynamics(const JointState& s, const ArmModel& model, double step)
{
    check_dimensions(s, model);
    const int n = s.dof();
    NumericalDynamics out;
    out.M = polarized_inertia(s.theta, model);

    const Vec Md_qd = (polarized_inertia(s.theta + step * s.theta_dot, model) -
                       polarized_inertia(s.theta - step * s.theta_dot, model)) *
                      s.theta_dot / (2.0 * step);
    Vec dT(n);
    out.G.resize(n);
    for (int k = 0; k < n; ++k) {
        const Vec dq = step * Vec::Unit(n, k);
        dT[k] = (link_kinetic_energy(s.theta + dq, s.theta_dot, model) -
                 link_kinetic_energy(s.theta - dq, s.theta_dot, model)) /
                (2.0 * step);
        out.G[k] = (gravity_potential(s.theta + dq, model) - gravity_potential(s.theta - dq, model)) / (2.0 * step);
    }
    out.H = Md_qd - dT;
    return out;
}

SimConfig regulation_variant(const SimConfig& base, double initial_error, double t_end)
{
    SimConfig cfg = base;
    const TaskVec setpoint = target_at(base.traj.t0, base.traj).Xd;
    cfg.traj.mode = TrajectoryMode::setpoint;
    cfg.traj.setpoint = setpoint;
    const TaskVec x0 = forward_kinematics(base.theta0, base.model);
    cfg.theta0 = base.theta0;
    cfg.theta0[0] += 2.0 * std::asin(initial_error / (2.0 * x0.norm()));
    cfg.theta_dot0 = Vec::Zero(base.model.dof());
    cfg.t_end = cfg.traj.t0 + t_end;
    cfg.control_period.reset();
    return cfg;
}

SimConfig rate_check_variant(const SimConfig& base, double t_end, double dt)
{
    SimConfig cfg = regulation_variant(base, 0.05, t_end);
    cfg.dt = dt;
    cfg.log_stride = 1;
    cfg.integrator = Integrator::rk4;
    return cfg;
}

std::vector<CheckResult> run_verification(const Experiment& exp, const VerifyOptions& opts)
{
    const SimConfig& cfg = exp.sim;
    const ArmModel& model = cfg.model;
    const int n = model.dof();
    std::vector<CheckResult> out;
    const auto states = random_states(model, opts);

    {
        double worst = 0.0, worst_dot = 0.0;
        const double h = 1e-6;
        for (const auto& s : states) {
            const TaskJacobian J = jacobian(s.theta, model);
            TaskJacobian fd(kTaskDim, n);
            for (int k = 0; k < n; ++k) {
                const Vec dq = h * Vec::Unit(n, k);
                fd.col(k) = (forward_kinematics(s.theta + dq, model) - forward_kinematics(s.theta - dq, model)) / (2 * h);
            }
            worst = std::max(worst, rel_err(fd, J));
            const TaskJacobian Jd = jacobian_dot(s, model);
            const TaskJacobian Jd_fd =
                (jacobian(Vec(s.theta + h * s.theta_dot), model) - jacobian(Vec(s.theta - h * s.theta_dot), model)) / (2 * h);
            worst_dot = std::max(worst_dot, rel_err(Jd_fd, Jd));
        }
        out.push_back(make("jacobian_finite_difference", worst, 1e-6));
        out.push_back(make("jacobian_dot_finite_difference", worst_dot, 1e-5));
    }

    {
        double worst_sym = 0.0, min_eig = std::numeric_limits<double>::infinity();
        double worst_oracle = 0.0, worst_skew = 0.0;
        for (const auto& s : states) {
            const auto terms = dynamics_terms(s, model);
            worst_sym = std::max(worst_sym, (terms.M - terms.M.transpose()).norm() / terms.M.norm());
            Eigen::SelfAdjointEigenSolver<Mat> eig(terms.M);
            min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());

            const auto num = numerical_dynamics(s, model);
            worst_oracle = std::max({worst_oracle, rel_err(num.M, terms.M), rel_err(num.H, terms.H),
                                     rel_err(num.G, terms.G, 1e-9)});

            const Mat N = inertia_rate(s, model) - 2.0 * terms.C_mat;
            const double q = std::abs(s.theta_dot.dot(N * s.theta_dot));
            worst_skew = std::max(worst_skew, q / (s.theta_dot.squaredNorm() * terms.M.norm()));
        }
        std::ostringstream d;
        d << "smallest eigenvalue " << min_eig;
        out.push_back(make("inertia_symmetric_positive_definite", min_eig > 0.0 ? worst_sym : INFINITY, 1e-12, d.str()));
        out.push_back(make("lagrangian_oracle", worst_oracle, 1e-5));
        out.push_back(make("coriolis_skew_symmetry", worst_skew, 1e-9));
    }

    {
        const TaskMat K1 = cfg.gains.k1(cfg.env);
        double worst = 0.0;
        const double h = 1e-6;
        for (const auto& s : states) {
            // Targets near the end-effector keep Y in the working range.
            const TaskVec Xd = forward_kinematics(s.theta, model) + 0.05 * TaskVec(s.theta_dot[0], s.theta_dot[1]);
            const auto P = [&](const Vec& q) { return potential_energy(forward_kinematics(q, model) - Xd, K1); };
            Vec fd(n);
            for (int k = 0; k < n; ++k) {
                const Vec dq = h * Vec::Unit(n, k);
                fd[k] = (P(s.theta + dq) - P(s.theta - dq)) / (2 * h);
            }
            worst = std::max(worst, rel_err(fd, potential_gradient(s.theta, Xd, model, K1)));
        }
        out.push_back(make("potential_gradient", worst, 1e-5));
    }

    const bool exact = cfg.gains.sign_mode.kind == SignMode::Kind::exact;
    const SimConfig rate_cfg = rate_check_variant(cfg);
    try {
        const Trace trace = run(rate_cfg);
        const double exclusion = exact ? kSigmaCrossingExclusion : 0.0;

        // Energy rate: five-point derivative of T against qdot^T (M qddot + H).
        std::vector<RatePoint> energy;
        const auto& rows = trace.rows;
        for (std::size_t i = 2; i + 2 < rows.size(); ++i) {
            const double h = rows[i + 1].t - rows[i].t;
            const JointState s{rows[i].theta, rows[i].theta_dot};
            const auto ev = evaluate_closed_loop(s, rows[i].t, rate_cfg);
            RatePoint p;
            p.t = rows[i].t;
            p.dV_fd = (rows[i - 2].T_kin - 8.0 * rows[i - 1].T_kin + 8.0 * rows[i + 1].T_kin - rows[i + 2].T_kin) / (12.0 * h);
            p.dV_rhs = s.theta_dot.dot(ev.terms.M * ev.theta_ddot + ev.terms.H);
            p.sigma = rows[i - 2].sigma * rows[i + 2].sigma <= 0.0 ? 0.0 : rows[i].sigma;
            energy.push_back(p);
        }
        const auto e = rate_agreement(energy, kRateFloor, exclusion);
        std::ostringstream de;
        de << e.compared << " points, worst at t = " << e.worst_time;
        out.push_back(make("energy_rate_identity", e.worst_relative_error, 1e-4, de.str()));

        const auto r = rate_agreement(lyapunov_rate_comparison(trace, Stencil::five_point), kRateFloor, exclusion);
        std::ostringstream dr;
        dr << r.compared << " points, worst at t = " << r.worst_time << (exact ? ", exact sign" : ", boundary layer");
        out.push_back(make("lyapunov_rate_identity", r.worst_relative_error,
                           exact ? kRateToleranceExact : kRateToleranceSmooth, dr.str()));
    } catch (const DivergenceError& err) {
        out.push_back({"energy_rate_identity", INFINITY, 1e-4, false, err.what()});
        out.push_back({"lyapunov_rate_identity", INFINITY, kRateToleranceSmooth, false, err.what()});
    }

    try {
        const Trace trace = run(regulation_variant(cfg));
        const auto m = check_monotone(trace, kMonotoneTolerance, kLyapunovBandFraction);
        std::ostringstream d;
        d << "V " << m.V_initial << " -> " << m.V_final << " J, largest rise " << m.worst_increase << " J";
        CheckResult c{"lyapunov_monotone_decay", m.worst_increase, kMonotoneTolerance, m.passed(), d.str()};
        out.push_back(c);
    } catch (const DivergenceError& err) {
        out.push_back({"lyapunov_monotone_decay", INFINITY, kMonotoneTolerance, false, err.what()});
    }
    return out;
}

}  // namespace rftrack
