#pragma once

#include "rftrack/environment.hpp"
#include "rftrack/kinematics.hpp"
#include "rftrack/trajectory.hpp"

namespace rftrack {

/// How sgn(sigma) is evaluated in the robust term.
struct SignMode {
    enum class Kind { exact, boundary_layer };
    Kind kind = Kind::exact;
    double epsilon = 0.01;  // boundary-layer width, only for boundary_layer

    static SignMode exact() { return {}; }
    static SignMode boundary_layer(double eps) { return {Kind::boundary_layer, eps}; }
};

/// Exact sign with sgn(0) = 0, or tanh(sigma / epsilon).
double switching(double sigma, const SignMode& mode);

/// Gains of the robust position/force law. All matrices are diagonal.
struct ControllerGains {
    TaskMat Kp = TaskMat::Zero();      // N/m
    TaskMat Kv = TaskMat::Zero();      // N s/m
    TaskMat Lambda = TaskMat::Zero();  // 1/s
    double K = 0.0;                    // robust gain
    TaskRow C_row = TaskRow::Ones();   // sliding-surface weights
    TaskMat Ke_nominal = TaskMat::Zero();  // designer's stiffness estimate, N/m
    SignMode sign_mode;

    /// Closed-loop stiffness Kp - Ke - dKe for a given (true) environment.
    TaskMat k1(const EnvironmentModel& env) const { return Kp - env.total_stiffness(); }
    /// Closed-loop damping.
    const TaskMat& k2() const { return Kv; }

    /// Structural checks: finite, diagonal, non-negative, C_row nonzero.
    /// Strict positivity is a feasibility question, see check_gain_conditions.
    void validate() const;
};

/// sigma = C (e_dot + Lambda e), with e = Xd - X.
double sigma(const TaskVec& e, const TaskVec& e_dot, const ControllerGains& gains);

/// Joint torque of the robust law:
///   U = J^T (Kp e + Kv e_dot) + J^T e_dot K sigma sgn(sigma) + G
/// X and X_dot are computed from the state. The contact force never enters.
Vec control_torque(const JointState& s, const TaskTarget& target, const ControllerGains& gains,
                   const ArmModel& model);

/// Same law on precomputed kinematics and gravity vector.
Vec control_torque(const TaskJacobian& J, const TaskVec& e, const TaskVec& e_dot, const Vec& G,
                   const ControllerGains& gains);

struct FeasibilityReport {
    bool stiffness_ok = false;  // dKe - Kp + Ke < 0 on every axis
    bool damping_ok = false;    // Kv > 0 on every axis
    TaskVec margin = TaskVec::Zero();  // Kp - Ke - dKe per axis, N/m

    bool passed() const { return stiffness_ok && damping_ok; }
    double min_margin() const { return margin.minCoeff(); }
};

/// Gain conditions evaluated at a worst-case diagonal stiffness-uncertainty
/// bound. Throws ContractViolation on non-diagonal input.
FeasibilityReport check_gain_conditions(const ControllerGains& gains, const TaskMat& dKe_bound);

}  // namespace rftrack
