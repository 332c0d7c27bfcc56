#include "rftrack/environment.hpp"

namespace rftrack {

void EnvironmentModel::validate() const
{
    if (!stiffness.allFinite() || !stiffness_uncertainty.allFinite())
        throw ContractViolation("environment stiffness must be finite");
    if (!is_diagonal(stiffness) || !is_diagonal(stiffness_uncertainty))
        throw ContractViolation("environment stiffness matrices must be diagonal");
    const TaskMat total = total_stiffness();
    for (int i = 0; i < kTaskDim; ++i) {
        if (stiffness(i, i) < 0.0) throw ContractViolation("nominal stiffness must be non-negative");
        if (total(i, i) < 0.0)
            throw ContractViolation("stiffness plus uncertainty must be non-negative");
    }
    if (contact_axis < 0 || contact_axis >= kTaskDim)
        throw ContractViolation("contact axis out of range");
}

TaskVec contact_force(const TaskVec& X, const TaskVec& Xd, const EnvironmentModel& env)
{
    const TaskVec err = Xd - X;
    if (!env.always_in_contact && err[env.contact_axis] < 0.0) return TaskVec::Zero();
    return env.total_stiffness().diagonal().cwiseProduct(err);
}

}  // namespace rftrack
