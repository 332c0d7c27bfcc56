#include "rftrack/controller.hpp"

#include <cmath>

#include "rftrack/dynamics.hpp"

namespace rftrack {

double switching(double sigma, const SignMode& mode)
{
    if (mode.kind == SignMode::Kind::boundary_layer) return std::tanh(sigma / mode.epsilon);
    return static_cast<double>((sigma > 0.0) - (sigma < 0.0));
}

void ControllerGains::validate() const
{
    for (const TaskMat* m : {&Kp, &Kv, &Lambda, &Ke_nominal}) {
        if (!m->allFinite()) throw ContractViolation("gain matrices must be finite");
        if (!is_diagonal(*m)) throw ContractViolation("gain matrices must be diagonal");
        if ((m->diagonal().array() < 0.0).any())
            throw ContractViolation("gain matrices must have non-negative diagonals");
    }
    if (!(std::isfinite(K) && K >= 0.0)) throw ContractViolation("robust gain K must be non-negative");
    if (!C_row.allFinite() || C_row.isZero(0.0)) throw ContractViolation("C_row must be nonzero");
    if (sign_mode.kind == SignMode::Kind::boundary_layer &&
        !(std::isfinite(sign_mode.epsilon) && sign_mode.epsilon > 0.0))
        throw ContractViolation("boundary-layer width must be positive");
}

double sigma(const TaskVec& e, const TaskVec& e_dot, const ControllerGains& gains)
{
    return gains.C_row * (e_dot + gains.Lambda * e);
}

Vec control_torque(const TaskJacobian& J, const TaskVec& e, const TaskVec& e_dot, const Vec& G,
                   const ControllerGains& gains)
{
    const double sg = sigma(e, e_dot, gains);
    const double robust = gains.K * sg * switching(sg, gains.sign_mode);
    const TaskVec task_force = gains.Kp * e + gains.Kv * e_dot + robust * e_dot;
    return J.transpose() * task_force + G;
}

Vec control_torque(const JointState& s, const TaskTarget& target, const ControllerGains& gains,
                   const ArmModel& model)
{
    check_dimensions(s, model);
    const TaskJacobian J = jacobian(s.theta, model);
    const TaskVec e = target.Xd - forward_kinematics(s.theta, model);
    const TaskVec e_dot = target.Xd_dot - J * s.theta_dot;
    return control_torque(J, e, e_dot, gravity_vector(s.theta, model), gains);
}

FeasibilityReport check_gain_conditions(const ControllerGains& gains, const TaskMat& dKe_bound)
{
    if (!is_diagonal(gains.Kp) || !is_diagonal(gains.Kv) || !is_diagonal(gains.Ke_nominal) ||
        !is_diagonal(dKe_bound))
        throw ContractViolation("gain conditions are defined for diagonal matrices only");
    FeasibilityReport r;
    const TaskMat cond = dKe_bound - gains.Kp + gains.Ke_nominal;
    r.margin = -cond.diagonal();
    r.stiffness_ok = (cond.diagonal().array() < 0.0).all();
    r.damping_ok = (gains.Kv.diagonal().array() > 0.0).all();
    return r;
}

}  // namespace rftrack
