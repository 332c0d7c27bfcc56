#include "rftrack/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace rftrack {

namespace {

// Per-link geometry. For link i, com_jac[i] is the 2 x n translational
// Jacobian of its COM (columns beyond i are zero); its angular velocity is
// the sum of theta_dot_0..theta_dot_i.
struct LinkGeometry {
    std::vector<TaskVec> dir;   // (cos phi_i, sin phi_i)
    std::vector<TaskVec> perp;  // (-sin phi_i, cos phi_i)
    std::vector<TaskJacobian> com_jac;
};

LinkGeometry link_geometry(const Vec& theta, const ArmModel& model)
{
    const int n = model.dof();
    if (theta.size() != n) throw ContractViolation("joint vector does not match arm dimension");
    LinkGeometry g;
    g.dir.resize(n);
    g.perp.resize(n);
    double phi = 0.0;
    for (int i = 0; i < n; ++i) {
        phi += theta[i];
        g.dir[i] = TaskVec(std::cos(phi), std::sin(phi));
        g.perp[i] = TaskVec(-std::sin(phi), std::cos(phi));
    }
    g.com_jac.assign(n, TaskJacobian::Zero(kTaskDim, n));
    for (int i = 0; i < n; ++i) {
        TaskVec col = model.com_offsets[i] * g.perp[i];
        for (int k = i; k >= 0; --k) {
            g.com_jac[i].col(k) = col;
            if (k > 0) col += model.link_lengths[k - 1] * g.perp[k - 1];
        }
    }
    return g;
}

// d(com_jac[i])/d theta_j. Entry k (k <= i) is
//   -( sum_{q = max(k,j)}^{i-1} l_q dir_q + c_i dir_i )   when j <= i.
TaskJacobian com_jac_partial(const LinkGeometry& g, const ArmModel& model, int i, int j)
{
    const int n = model.dof();
    TaskJacobian d = TaskJacobian::Zero(kTaskDim, n);
    if (j > i) return d;
    TaskVec tail = model.com_offsets[i] * g.dir[i];
    for (int k = i; k >= 0; --k) {
        // tail holds sum_{q=k}^{i-1} l_q dir_q + c_i dir_i
        if (k >= j)
            d.col(k) = -tail;
        else
            d.col(k) = d.col(j);
        if (k > 0) tail += model.link_lengths[k - 1] * g.dir[k - 1];
    }
    return d;
}

Mat assemble_inertia(const LinkGeometry& g, const ArmModel& model)
{
    const int n = model.dof();
    Mat M = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        M.noalias() += model.link_masses[i] * g.com_jac[i].transpose() * g.com_jac[i];
        M.topLeftCorner(i + 1, i + 1).array() += model.link_inertias[i];
    }
    return M;
}

std::vector<Mat> assemble_partials(const LinkGeometry& g, const ArmModel& model)
{
    const int n = model.dof();
    std::vector<Mat> dM(n, Mat::Zero(n, n));
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            const TaskJacobian d = com_jac_partial(g, model, i, j);
            const Mat prod = d.transpose() * g.com_jac[i];
            dM[j].noalias() += model.link_masses[i] * (prod + prod.transpose());
        }
    }
    return dM;
}

Vec assemble_gravity(const LinkGeometry& g, const ArmModel& model)
{
    Vec G = Vec::Zero(model.dof());
    for (int i = 0; i < model.dof(); ++i)
        G.noalias() -= model.link_masses[i] * g.com_jac[i].transpose() * model.gravity;
    return G;
}

}  // namespace

Mat inertia_matrix(const Vec& theta, const ArmModel& model)
{
    return assemble_inertia(link_geometry(theta, model), model);
}

std::vector<Mat> inertia_partials(const Vec& theta, const ArmModel& model)
{
    return assemble_partials(link_geometry(theta, model), model);
}

Mat inertia_rate(const JointState& s, const ArmModel& model)
{
    check_dimensions(s, model);
    const auto dM = inertia_partials(s.theta, model);
    Mat Md = Mat::Zero(s.dof(), s.dof());
    for (int k = 0; k < s.dof(); ++k) Md += dM[k] * s.theta_dot[k];
    return Md;
}

Vec gravity_vector(const Vec& theta, const ArmModel& model)
{
    return assemble_gravity(link_geometry(theta, model), model);
}

double gravity_potential(const Vec& theta, const ArmModel& model)
{
    if (theta.size() != model.dof()) throw ContractViolation("joint vector does not match arm dimension");
    double U = 0.0;
    TaskVec joint = TaskVec::Zero();
    double phi = 0.0;
    for (int i = 0; i < model.dof(); ++i) {
        phi += theta[i];
        const TaskVec dir(std::cos(phi), std::sin(phi));
        const TaskVec com = joint + model.com_offsets[i] * dir;
        U -= model.link_masses[i] * model.gravity.dot(com);
        joint += model.link_lengths[i] * dir;
    }
    return U;
}

DynamicsTerms dynamics_terms(const JointState& s, const ArmModel& model)
{
    check_dimensions(s, model);
    const int n = s.dof();
    const auto g = link_geometry(s.theta, model);
    DynamicsTerms t;
    t.M = assemble_inertia(g, model);
    t.G = assemble_gravity(g, model);

    const auto dM = assemble_partials(g, model);
    // C_ij = sum_k 1/2 (dM_ij/dq_k + dM_ik/dq_j - dM_jk/dq_i) qdot_k
    t.C_mat = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double c = 0.0;
            for (int k = 0; k < n; ++k)
                c += 0.5 * (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * s.theta_dot[k];
            t.C_mat(i, j) = c;
        }
    t.H = t.C_mat * s.theta_dot;
    return t;
}

Vec forward_dynamics(const DynamicsTerms& terms, const TaskJacobian& J, const Vec& U,
                     const TaskVec& F)
{
    const auto n = terms.M.rows();
    if (U.size() != n || J.cols() != n)
        throw ContractViolation("torque/Jacobian dimension does not match the inertia matrix");
    Eigen::LLT<Mat> llt(terms.M);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "inertia matrix is not positive definite:\n" << terms.M;
        throw std::runtime_error(os.str());
    }
    return llt.solve(U - J.transpose() * F - terms.H - terms.G);
}

Vec forward_dynamics(const JointState& s, const Vec& U, const TaskVec& F, const ArmModel& model)
{
    const auto terms = dynamics_terms(s, model);
    try {
        return forward_dynamics(terms, jacobian(s.theta, model), U, F);
    } catch (const std::runtime_error& e) {
        std::ostringstream os;
        os << e.what() << "\nat theta = " << s.theta.transpose();
        throw std::runtime_error(os.str());
    }
}

double kinetic_energy(const JointState& s, const ArmModel& model)
{
    check_dimensions(s, model);
    return 0.5 * s.theta_dot.dot(inertia_matrix(s.theta, model) * s.theta_dot);
}

}  // namespace rftrack
