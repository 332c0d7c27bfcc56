#include "rftrack/kinematics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

namespace rftrack {

ArmModel ArmModel::uniform_rods(std::vector<double> lengths, std::vector<double> masses,
                                TaskVec gravity)
{
    ArmModel m;
    m.com_offsets.reserve(lengths.size());
    m.link_inertias.reserve(lengths.size());
    for (std::size_t i = 0; i < lengths.size() && i < masses.size(); ++i) {
        m.com_offsets.push_back(0.5 * lengths[i]);
        m.link_inertias.push_back(masses[i] * lengths[i] * lengths[i] / 12.0);
    }
    m.link_lengths = std::move(lengths);
    m.link_masses = std::move(masses);
    m.gravity = gravity;
    return m;
}

double ArmModel::reach() const
{
    return std::accumulate(link_lengths.begin(), link_lengths.end(), 0.0);
}

void ArmModel::validate() const
{
    const auto n = link_lengths.size();
    if (n == 0) throw ContractViolation("arm needs at least one link");
    if (link_masses.size() != n || com_offsets.size() != n || link_inertias.size() != n)
        throw ContractViolation("arm parameter lists must all have length " + std::to_string(n));
    if (!gravity.allFinite()) throw ContractViolation("gravity must be finite");
    for (std::size_t i = 0; i < n; ++i) {
        const auto link = "link " + std::to_string(i + 1);
        if (!(std::isfinite(link_lengths[i]) && link_lengths[i] > 0.0))
            throw ContractViolation(link + ": length must be strictly positive");
        if (!(std::isfinite(link_masses[i]) && link_masses[i] > 0.0))
            throw ContractViolation(link + ": mass must be strictly positive");
        if (!(std::isfinite(link_inertias[i]) && link_inertias[i] >= 0.0))
            throw ContractViolation(link + ": inertia must be non-negative");
        if (!(com_offsets[i] >= 0.0 && com_offsets[i] <= link_lengths[i]))
            throw ContractViolation(link + ": COM offset must lie within the link");
    }
}

void check_dimensions(const JointState& s, const ArmModel& model)
{
    const auto n = model.dof();
    if (s.theta.size() != n || s.theta_dot.size() != n)
        throw ContractViolation("joint state has dimension " + std::to_string(s.theta.size()) + "/" +
                                std::to_string(s.theta_dot.size()) + ", arm has " +
                                std::to_string(n) + " joints");
}

namespace {

void check_theta(const Vec& theta, const ArmModel& model)
{
    if (theta.size() != model.dof())
        throw ContractViolation("joint vector has dimension " + std::to_string(theta.size()) +
                                ", arm has " + std::to_string(model.dof()) + " joints");
}

}  // namespace

TaskVec forward_kinematics(const Vec& theta, const ArmModel& model)
{
    check_theta(theta, model);
    TaskVec x = TaskVec::Zero();
    double phi = 0.0;
    for (int i = 0; i < theta.size(); ++i) {
        phi += theta[i];
        x += model.link_lengths[i] * TaskVec(std::cos(phi), std::sin(phi));
    }
    return x;
}

TaskJacobian jacobian(const Vec& theta, const ArmModel& model)
{
    check_theta(theta, model);
    const int n = static_cast<int>(theta.size());
    TaskJacobian J(kTaskDim, n);
    Vec phi(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) phi[i] = (acc += theta[i]);
    // Column k sums the perpendicular directions of links k..n-1.
    TaskVec tail = TaskVec::Zero();
    for (int k = n - 1; k >= 0; --k) {
        tail += model.link_lengths[k] * TaskVec(-std::sin(phi[k]), std::cos(phi[k]));
        J.col(k) = tail;
    }
    return J;
}

TaskJacobian jacobian_dot(const JointState& s, const ArmModel& model)
{
    check_dimensions(s, model);
    const int n = s.dof();
    TaskJacobian Jd(kTaskDim, n);
    Vec phi(n), phi_dot(n);
    double a = 0.0, ad = 0.0;
    for (int i = 0; i < n; ++i) {
        phi[i] = (a += s.theta[i]);
        phi_dot[i] = (ad += s.theta_dot[i]);
    }
    TaskVec tail = TaskVec::Zero();
    for (int k = n - 1; k >= 0; --k) {
        tail -= model.link_lengths[k] * phi_dot[k] * TaskVec(std::cos(phi[k]), std::sin(phi[k]));
        Jd.col(k) = tail;
    }
    return Jd;
}

double min_singular_value(const TaskJacobian& J)
{
    Eigen::JacobiSVD<Mat> svd(J);
    const auto& sv = svd.singularValues();
    return sv.size() < kTaskDim ? 0.0 : sv[kTaskDim - 1];
}

}  // namespace rftrack
