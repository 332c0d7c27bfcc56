#pragma once

#include <vector>

#include "rftrack/types.hpp"

namespace rftrack {

/// Planar serial arm with revolute joints. Link i rotates about the distal
/// end of link i-1; the base joint sits at the task-space origin.
struct ArmModel {
    std::vector<double> link_lengths;   // m
    std::vector<double> link_masses;    // kg
    std::vector<double> com_offsets;    // m, from the proximal joint
    std::vector<double> link_inertias;  // kg m^2 about the COM
    TaskVec gravity{0.0, -9.81};        // m/s^2, in the task plane

    /// Uniform rods: COM at mid-length, inertia m l^2 / 12.
    static ArmModel uniform_rods(std::vector<double> lengths, std::vector<double> masses,
                                 TaskVec gravity = TaskVec(0.0, -9.81));

    int dof() const { return static_cast<int>(link_lengths.size()); }
    double reach() const;

    /// Throws ContractViolation if any physical invariant is broken.
    void validate() const;
};

struct JointState {
    Vec theta;      // rad
    Vec theta_dot;  // rad/s

    int dof() const { return static_cast<int>(theta.size()); }
    bool finite() const { return theta.allFinite() && theta_dot.allFinite(); }
};

/// End-effector position h(theta).
TaskVec forward_kinematics(const Vec& theta, const ArmModel& model);
inline TaskVec forward_kinematics(const JointState& s, const ArmModel& model)
{
    return forward_kinematics(s.theta, model);
}

/// Analytic Jacobian dh/dtheta (2 x n). Rank is not checked here.
TaskJacobian jacobian(const Vec& theta, const ArmModel& model);
inline TaskJacobian jacobian(const JointState& s, const ArmModel& model)
{
    return jacobian(s.theta, model);
}

/// Time derivative of the Jacobian along theta_dot.
TaskJacobian jacobian_dot(const JointState& s, const ArmModel& model);

/// Smallest singular value of a 2 x n Jacobian (0 for rank-deficient J).
double min_singular_value(const TaskJacobian& J);

/// Throws ContractViolation unless the state matches the arm's joint count.
void check_dimensions(const JointState& s, const ArmModel& model);

}  // namespace rftrack
