#include <gtest/gtest.h>

#include "rftrack/dynamics.hpp"
#include "rftrack/verify.hpp"
#include "support.hpp"

using namespace rftrack;

TEST(Verify, NumericalDynamicsAgreesWithClosedForm)
{
    const auto arm = testing_support::reference_arm();
    testing_support::Sampler rng(51);
    for (int k = 0; k < 20; ++k) {
        const JointState s = rng.state(3);
        const auto num = numerical_dynamics(s, arm);
        const auto terms = dynamics_terms(s, arm);
        EXPECT_LT(testing_support::rel_err(terms.M, num.M), 1e-6);
        EXPECT_LT(testing_support::rel_err(terms.H, num.H), 1e-5);
        EXPECT_LT(testing_support::rel_err(terms.G, num.G), 1e-6);
    }
}

TEST(Verify, RegulationVariantStartsOffTargetAtRest)
{
    const auto base = reference_experiment().sim;
    const SimConfig c = regulation_variant(base);
    EXPECT_EQ(c.traj.mode, TrajectoryMode::setpoint);
    EXPECT_EQ(c.theta_dot0, Vec::Zero(3));
    const double err = (forward_kinematics(c.theta0, c.model) - c.traj.setpoint).norm();
    EXPECT_NEAR(err, 0.05, 1e-12);
}

TEST(Verify, AllChecksPassInBothSignModes)
{
    for (const char* mode : {"exact", "boundary_layer"}) {
        auto exp = reference_experiment();
        exp.sim.gains.sign_mode = parse_sign_mode(mode);
        VerifyOptions opts;
        opts.random_states = 20;
        const auto results = run_verification(exp, opts);
        EXPECT_EQ(results.size(), 9u);
        for (const auto& r : results) EXPECT_TRUE(r.passed) << mode << ": " << r.name << " " << r.value;
    }
}
