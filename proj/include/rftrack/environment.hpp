#pragma once

#include "rftrack/types.hpp"

namespace rftrack {

/// Linear-spring contact with a nominal stiffness and an unknown offset.
/// The plant applies (stiffness + stiffness_uncertainty); a controller only
/// ever sees its own nominal estimate.
struct EnvironmentModel {
    TaskMat stiffness = TaskMat::Zero();              // Ke, N/m, diagonal
    TaskMat stiffness_uncertainty = TaskMat::Zero();  // dKe, N/m, diagonal
    bool always_in_contact = true;
    /// Unilateral variant: with always_in_contact off, the force vanishes
    /// whenever the error (Xd - X) along this axis is negative.
    int contact_axis = 0;

    TaskMat total_stiffness() const { return stiffness + stiffness_uncertainty; }

    /// Throws ContractViolation for non-diagonal or negative stiffness.
    void validate() const;
};

/// Force exerted by the manipulator on the environment, N. It enters the
/// arm dynamics as -J^T F.
TaskVec contact_force(const TaskVec& X, const TaskVec& Xd, const EnvironmentModel& env);

}  // namespace rftrack
