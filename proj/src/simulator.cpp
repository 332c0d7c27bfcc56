#include "rftrack/simulator.hpp"

#include <cmath>
#include <sstream>

#include "rftrack/analysis.hpp"

namespace rftrack {

void SimConfig::validate() const
{
    model.validate();
    env.validate();
    gains.validate();
    traj.validate();
    const auto n = model.dof();
    if (theta0.size() != n || theta_dot0.size() != n)
        throw ContractViolation("initial state must have " + std::to_string(n) + " joints");
    if (!theta0.allFinite() || !theta_dot0.allFinite())
        throw ContractViolation("initial state must be finite");
    if (!(std::isfinite(dt) && dt > 0.0)) throw ContractViolation("dt must be positive");
    if (!(std::isfinite(t_end) && t_end > traj.t0)) throw ContractViolation("t_end must exceed t0");
    if (log_stride < 1) throw ContractViolation("log_stride must be at least 1");
    if (control_period && !(std::isfinite(*control_period) && *control_period > 0.0))
        throw ContractViolation("control period must be positive");
    if (traj.mode == TrajectoryMode::circle && traj.radius > model.reach() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "trajectory radius " << traj.radius << " m exceeds arm reach " << model.reach() << " m";
        throw ContractViolation(os.str());
    }
}

DivergenceError::DivergenceError(const std::string& what, double t, JointState state,
                                 std::shared_ptr<const Trace> partial)
    : std::runtime_error(what), t_(t), state_(std::move(state)), partial_(std::move(partial))
{
}

ClosedLoopEval evaluate_closed_loop(const JointState& s, double t, const SimConfig& cfg,
                                    const Vec* held_U)
{
    ClosedLoopEval ev;
    ev.target = target_at(t, cfg.traj);
    ev.J = jacobian(s.theta, cfg.model);
    ev.X = forward_kinematics(s.theta, cfg.model);
    ev.X_dot = ev.J * s.theta_dot;
    ev.F = contact_force(ev.X, ev.target.Xd, cfg.env);
    ev.terms = dynamics_terms(s, cfg.model);
    const TaskVec e = ev.target.Xd - ev.X;
    const TaskVec e_dot = ev.target.Xd_dot - ev.X_dot;
    ev.sigma = sigma(e, e_dot, cfg.gains);
    ev.U = held_U ? *held_U : control_torque(ev.J, e, e_dot, ev.terms.G, cfg.gains);
    ev.theta_ddot = forward_dynamics(ev.terms, ev.J, ev.U, ev.F);
    return ev;
}

namespace {

Vec accel(const JointState& s, double t, const SimConfig& cfg, const Vec* held_U,
          IntegratorStats* stats)
{
    if (stats) ++stats->rhs_evaluations;
    Vec a = evaluate_closed_loop(s, t, cfg, held_U).theta_ddot;
    if (!a.allFinite()) {
        std::ostringstream os;
        os << "non-finite acceleration at t = " << t << ", theta = " << s.theta.transpose();
        throw DivergenceError(os.str(), t, s);
    }
    return a;
}

TraceRow make_row(const JointState& s, double t, const SimConfig& cfg, const Vec* held_U)
{
    const auto ev = evaluate_closed_loop(s, t, cfg, held_U);
    TraceRow r;
    r.t = t;
    r.theta = s.theta;
    r.theta_dot = s.theta_dot;
    r.X = ev.X;
    r.Xd = ev.target.Xd;
    r.F = ev.F;
    r.U = ev.U;
    r.sigma = ev.sigma;
    r.T_kin = 0.5 * s.theta_dot.dot(ev.terms.M * s.theta_dot);
    const TaskVec Y = ev.X - ev.target.Xd;
    const TaskVec Y_dot = ev.X_dot - ev.target.Xd_dot;
    r.V = r.T_kin + potential_energy(Y, cfg.gains.k1(cfg.env));
    r.dV_rhs = dissipation_rate(Y_dot, ev.sigma, cfg.gains);
    r.min_sv = min_singular_value(ev.J);
    return r;
}

bool row_finite(const TraceRow& r)
{
    return std::isfinite(r.t) && r.theta.allFinite() && r.theta_dot.allFinite() && r.X.allFinite() &&
           r.F.allFinite() && r.U.allFinite() && std::isfinite(r.sigma) && std::isfinite(r.V) &&
           std::isfinite(r.dV_rhs);
}

}  // namespace

JointState step(const JointState& s, double t, double h, const SimConfig& cfg, const Vec* held_U,
                IntegratorStats* stats)
{
    JointState next;
    switch (cfg.integrator) {
    case Integrator::rk4: {
        const Vec& q = s.theta;
        const Vec& v = s.theta_dot;
        const Vec a1 = accel(s, t, cfg, held_U, stats);
        const JointState s2{q + 0.5 * h * v, v + 0.5 * h * a1};
        const Vec a2 = accel(s2, t + 0.5 * h, cfg, held_U, stats);
        const JointState s3{q + 0.5 * h * s2.theta_dot, v + 0.5 * h * a2};
        const Vec a3 = accel(s3, t + 0.5 * h, cfg, held_U, stats);
        const JointState s4{q + h * s3.theta_dot, v + h * a3};
        const Vec a4 = accel(s4, t + h, cfg, held_U, stats);
        next.theta = q + h / 6.0 * (v + 2.0 * s2.theta_dot + 2.0 * s3.theta_dot + s4.theta_dot);
        next.theta_dot = v + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        break;
    }
    case Integrator::semi_implicit_euler: {
        const Vec a = accel(s, t, cfg, held_U, stats);
        next.theta_dot = s.theta_dot + h * a;
        next.theta = s.theta + h * next.theta_dot;
        break;
    }
    }
    if (stats) ++stats->steps;
    if (!next.finite()) {
        std::ostringstream os;
        os << "state became non-finite stepping from t = " << t;
        throw DivergenceError(os.str(), t + h, next);
    }
    return next;
}

JointState step(const JointState& s, double t, const SimConfig& cfg)
{
    check_dimensions(s, cfg.model);
    return step(s, t, cfg.dt, cfg);
}

Trace run(const SimConfig& cfg)
{
    cfg.validate();
    Trace trace;
    trace.config = cfg;
    trace.feasibility = check_gain_conditions(cfg.gains, cfg.env.stiffness_uncertainty);
    if (!trace.feasibility.passed())
        trace.warnings.push_back("gain conditions not satisfied at the plant stiffness uncertainty");

    const double t0 = cfg.traj.t0;
    const double span = cfg.t_end - t0;
    const auto n_steps = static_cast<long long>(std::ceil(span / cfg.dt - 1e-9));
    trace.rows.reserve(static_cast<std::size_t>(n_steps / cfg.log_stride + 2));

    JointState state = cfg.initial_state();
    Vec held;
    double next_sample = t0;
    long long samples_taken = 0;
    trace.min_singular_value = std::numeric_limits<double>::infinity();

    auto log = [&](double t) {
        TraceRow row = make_row(state, t, cfg, cfg.control_period ? &held : nullptr);
        if (!row_finite(row)) {
            trace.diverged = true;
            auto partial = std::make_shared<const Trace>(trace);
            throw DivergenceError("non-finite trace row at t = " + std::to_string(t), t, state,
                                  std::move(partial));
        }
        if (row.min_sv < kNearSingularThreshold) {
            if (trace.near_singular_rows == 0)
                trace.warnings.push_back("Jacobian near-singular (smallest singular value below 1e-6) from t = " +
                                         std::to_string(t));
            ++trace.near_singular_rows;
        }
        trace.min_singular_value = std::min(trace.min_singular_value, row.min_sv);
        trace.rows.push_back(std::move(row));
    };

    for (long long k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * cfg.dt;
        if (cfg.control_period && t >= next_sample - 1e-12) {
            held = evaluate_closed_loop(state, t, cfg).U;
            ++samples_taken;
            next_sample = t0 + static_cast<double>(samples_taken) * *cfg.control_period;
        }
        if (k % cfg.log_stride == 0) log(t);
        const double h = std::min(cfg.dt, cfg.t_end - t);
        try {
            state = step(state, t, h, cfg, cfg.control_period ? &held : nullptr, &trace.stats);
        } catch (const DivergenceError& e) {
            trace.diverged = true;
            throw DivergenceError(e.what(), e.time(), e.state(), std::make_shared<const Trace>(trace));
        }
    }
    log(cfg.t_end);
    return trace;
}

}  // namespace rftrack
