#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rftrack/controller.hpp"
#include "rftrack/dynamics.hpp"
#include "rftrack/environment.hpp"
#include "rftrack/kinematics.hpp"
#include "rftrack/trajectory.hpp"

namespace rftrack {

enum class Integrator { rk4, semi_implicit_euler };

struct SimConfig {
    ArmModel model;
    EnvironmentModel env;
    ControllerGains gains;
    TrajectoryConfig traj;
    Vec theta0;      // rad
    Vec theta_dot0;  // rad/s
    double dt = 1e-4;    // s
    double t_end = 1.0;  // s
    Integrator integrator = Integrator::rk4;
    int log_stride = 10;
    /// Zero-order-hold control period. Unset means the law is evaluated at
    /// every integrator stage.
    std::optional<double> control_period;

    JointState initial_state() const { return {theta0, theta_dot0}; }

    /// Throws ContractViolation on any broken invariant, including a circle
    /// larger than the arm's reach.
    void validate() const;
};

/// Closed-loop quantities at one (state, time) evaluation.
struct ClosedLoopEval {
    TaskTarget target;
    TaskJacobian J;
    TaskVec X = TaskVec::Zero();
    TaskVec X_dot = TaskVec::Zero();
    TaskVec F = TaskVec::Zero();
    DynamicsTerms terms;
    Vec U;
    Vec theta_ddot;
    double sigma = 0.0;
};

/// Evaluates target, contact force, control law and forward dynamics.
/// With held_U set, that torque replaces the control law.
ClosedLoopEval evaluate_closed_loop(const JointState& s, double t, const SimConfig& cfg,
                                    const Vec* held_U = nullptr);

struct TraceRow {
    double t = 0.0;
    Vec theta;
    Vec theta_dot;
    TaskVec X = TaskVec::Zero();
    TaskVec Xd = TaskVec::Zero();
    TaskVec F = TaskVec::Zero();
    Vec U;
    double sigma = 0.0;
    double V = 0.0;       // J
    double dV_rhs = 0.0;  // W
    double T_kin = 0.0;   // J
    double min_sv = 0.0;  // smallest singular value of J
};

struct IntegratorStats {
    long long steps = 0;
    long long rhs_evaluations = 0;
};

struct Trace {
    std::vector<TraceRow> rows;
    SimConfig config;
    IntegratorStats stats;
    FeasibilityReport feasibility;
    int near_singular_rows = 0;
    double min_singular_value = 0.0;
    std::vector<std::string> warnings;
    bool diverged = false;
};

/// Rows whose Jacobian singular value falls below this are flagged.
inline constexpr double kNearSingularThreshold = 1e-6;

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double t, JointState state,
                    std::shared_ptr<const Trace> partial = nullptr);

    double time() const { return t_; }
    const JointState& state() const { return state_; }
    /// Trace up to the last finite row; may be null when thrown from step().
    const std::shared_ptr<const Trace>& partial_trace() const { return partial_; }

private:
    double t_;
    JointState state_;
    std::shared_ptr<const Trace> partial_;
};

/// Advances the state from t to t + h (h defaults to cfg.dt).
JointState step(const JointState& s, double t, const SimConfig& cfg);
JointState step(const JointState& s, double t, double h, const SimConfig& cfg,
                const Vec* held_U = nullptr, IntegratorStats* stats = nullptr);

/// Integrates from traj.t0 to t_end, logging every log_stride steps plus the
/// final step. Throws DivergenceError carrying the partial trace.
Trace run(const SimConfig& cfg);

}  // namespace rftrack
