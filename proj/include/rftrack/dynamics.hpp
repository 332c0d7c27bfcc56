#pragma once

#include <vector>

#include "rftrack/kinematics.hpp"

namespace rftrack {

/// Terms of M(theta) theta_ddot + H(theta, theta_dot) + G(theta) = tau.
struct DynamicsTerms {
    Mat M;      // inertia, kg m^2
    Mat C_mat;  // Christoffel-form Coriolis matrix, H = C_mat * theta_dot
    Vec H;      // Coriolis/centrifugal, N m
    Vec G;      // gravity, N m
};

DynamicsTerms dynamics_terms(const JointState& s, const ArmModel& model);

Mat inertia_matrix(const Vec& theta, const ArmModel& model);

/// dM/dtheta_k for k = 0..n-1.
std::vector<Mat> inertia_partials(const Vec& theta, const ArmModel& model);

/// dM/dt = sum_k dM/dtheta_k * theta_dot_k.
Mat inertia_rate(const JointState& s, const ArmModel& model);

Vec gravity_vector(const Vec& theta, const ArmModel& model);

/// Gravitational potential energy of the links, J. G is its gradient.
double gravity_potential(const Vec& theta, const ArmModel& model);

/// theta_ddot = M^-1 (U - J^T F - H - G) via a Cholesky solve.
/// Throws std::runtime_error if M is not numerically SPD.
Vec forward_dynamics(const JointState& s, const Vec& U, const TaskVec& F, const ArmModel& model);

/// Same, with precomputed terms and Jacobian.
Vec forward_dynamics(const DynamicsTerms& terms, const TaskJacobian& J, const Vec& U,
                     const TaskVec& F);

/// T = 1/2 theta_dot^T M theta_dot, J.
double kinetic_energy(const JointState& s, const ArmModel& model);

}  // namespace rftrack
