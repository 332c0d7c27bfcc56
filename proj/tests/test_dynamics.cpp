#include <gtest/gtest.h>

#include "rftrack/dynamics.hpp"
#include "support.hpp"

using namespace rftrack;
using testing_support::reference_arm;
using testing_support::rel_err;
using testing_support::Sampler;

TEST(Dynamics, ClosedFormMatchesEulerLagrangeOracle)
{
    const auto arm = reference_arm();
    const auto o = testing_support::to_oracle(arm);
    Sampler rng(21);
    for (int k = 0; k < 100; ++k) {
        const JointState s = rng.state(3);
        const auto terms = dynamics_terms(s, arm);
        const auto ref = oracle::dynamics(o, s.theta, s.theta_dot);
        EXPECT_LT(rel_err(terms.M, ref.M), 1e-5);
        EXPECT_LT(rel_err(terms.H, ref.H), 1e-5);
        EXPECT_LT(rel_err(terms.G, ref.G), 1e-5);
    }
}

TEST(Dynamics, OracleAgreesOnFourLinkArm)
{
    auto arm = ArmModel::uniform_rods({0.4, 0.3, 0.2, 0.1}, {2.0, 1.5, 1.0, 0.5});
    arm.com_offsets = {0.1, 0.2, 0.05, 0.1};
    arm.gravity = TaskVec(1.0, -9.81);
    const auto o = testing_support::to_oracle(arm);
    Sampler rng(22);
    for (int k = 0; k < 20; ++k) {
        const JointState s = rng.state(4);
        const auto terms = dynamics_terms(s, arm);
        const auto ref = oracle::dynamics(o, s.theta, s.theta_dot);
        EXPECT_LT(rel_err(terms.M, ref.M), 1e-5);
        EXPECT_LT(rel_err(terms.H, ref.H), 1e-5);
        EXPECT_LT(rel_err(terms.G, ref.G), 1e-5);
    }
}

TEST(Dynamics, InertiaSymmetricPositiveDefinite)
{
    const auto arm = reference_arm();
    Sampler rng(23);
    for (int k = 0; k < 1000; ++k) {
        const Mat M = inertia_matrix(rng.vec(3, -10.0, 10.0), arm);
        EXPECT_LT((M - M.transpose()).cwiseAbs().maxCoeff(), 1e-12 * M.norm());
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat>(M).eigenvalues().minCoeff(), 0.0);
    }
}

TEST(Dynamics, CoriolisSkewSymmetry)
{
    const auto arm = reference_arm();
    Sampler rng(24);
    for (int k = 0; k < 1000; ++k) {
        const JointState s = rng.state(3);
        const auto terms = dynamics_terms(s, arm);
        const Mat N = inertia_rate(s, arm) - 2.0 * terms.C_mat;
        const double v = std::abs(s.theta_dot.dot(N * s.theta_dot));
        EXPECT_LT(v, 1e-9 * s.theta_dot.squaredNorm() * terms.M.norm());
        EXPECT_LT((N + N.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Dynamics, InertiaRateMatchesDifference)
{
    const auto arm = reference_arm();
    Sampler rng(25);
    const double h = 1e-6;
    for (int k = 0; k < 50; ++k) {
        const JointState s = rng.state(3);
        const Mat fd = (inertia_matrix(Vec(s.theta + h * s.theta_dot), arm) -
                        inertia_matrix(Vec(s.theta - h * s.theta_dot), arm)) / (2 * h);
        EXPECT_LT(rel_err(inertia_rate(s, arm), fd), 1e-6);
    }
}

TEST(Dynamics, CoriolisVanishesAtRest)
{
    const JointState s{Vec::Constant(3, 0.9), Vec::Zero(3)};
    EXPECT_EQ(dynamics_terms(s, reference_arm()).H.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dynamics, NoGravityNoGravityTorque)
{
    auto arm = reference_arm();
    arm.gravity = TaskVec::Zero();
    Sampler rng(26);
    for (int k = 0; k < 20; ++k) EXPECT_EQ(gravity_vector(rng.vec(3, -3, 3), arm).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dynamics, GravityIsPotentialGradient)
{
    const auto arm = reference_arm();
    Sampler rng(27);
    const double h = 1e-6;
    const Vec q = rng.vec(3, -3, 3);
    Vec fd(3);
    for (int j = 0; j < 3; ++j)
        fd[j] = (gravity_potential(Vec(q + h * Vec::Unit(3, j)), arm) -
                 gravity_potential(Vec(q - h * Vec::Unit(3, j)), arm)) / (2 * h);
    EXPECT_LT(rel_err(gravity_vector(q, arm), fd), 1e-7);
}

TEST(ForwardDynamics, BalancedTorqueGivesZeroAcceleration)
{
    const auto arm = reference_arm();
    const JointState s{(Vec(3) << 0.2, -0.4, 1.1).finished(), (Vec(3) << 0.5, 0.3, -0.7).finished()};
    const TaskVec F(2.0, -1.5);
    const auto terms = dynamics_terms(s, arm);
    const Vec U = jacobian(s, arm).transpose() * F + terms.H + terms.G;
    EXPECT_LT(forward_dynamics(s, U, F, arm).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForwardDynamics, GravityCompensationHoldsStaticArm)
{
    const auto arm = reference_arm();
    const JointState s{(Vec(3) << 0.7, 0.1, -0.3).finished(), Vec::Zero(3)};
    const Vec U = gravity_vector(s.theta, arm);
    EXPECT_LT(forward_dynamics(s, U, TaskVec::Zero(), arm).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForwardDynamics, ResidualVanishes)
{
    const auto arm = reference_arm();
    Sampler rng(28);
    for (int k = 0; k < 100; ++k) {
        const JointState s = rng.state(3);
        const Vec U = rng.vec(3, -20, 20);
        const TaskVec F = rng.vec(2, -50, 50);
        const Vec acc = forward_dynamics(s, U, F, arm);
        const auto t = dynamics_terms(s, arm);
        const Vec r = t.M * acc + t.H + t.G + jacobian(s, arm).transpose() * F - U;
        EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(KineticEnergy, ZeroAtRestAndQuadratic)
{
    const auto arm = reference_arm();
    const JointState rest{Vec::Constant(3, 0.5), Vec::Zero(3)};
    EXPECT_EQ(kinetic_energy(rest, arm), 0.0);
    const JointState s{Vec::Constant(3, 0.5), (Vec(3) << 1.0, -2.0, 0.5).finished()};
    const JointState s2{s.theta, 2.0 * s.theta_dot};
    EXPECT_NEAR(kinetic_energy(s2, arm), 4.0 * kinetic_energy(s, arm), 1e-13);
    EXPECT_GT(kinetic_energy(s, arm), 0.0);
}

TEST(KineticEnergy, CoriolisContractionIdentity)
{
    const auto arm = reference_arm();
    Sampler rng(29);
    for (int k = 0; k < 100; ++k) {
        const JointState s = rng.state(3);
        const double lhs = s.theta_dot.dot(dynamics_terms(s, arm).H);
        const double rhs = 0.5 * s.theta_dot.dot(inertia_rate(s, arm) * s.theta_dot);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}
