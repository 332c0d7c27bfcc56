#include <gtest/gtest.h>

#include <numbers>

#include "rftrack/trajectory.hpp"

using namespace rftrack;
constexpr double pi = std::numbers::pi;

TEST(TimeScaling, Endpoints)
{
    const TrajectoryConfig cfg;
    const auto a = time_scaling(0.0, cfg);
    EXPECT_EQ(a.s, 0.0);
    EXPECT_EQ(a.s_dot, 0.0);
    const auto m = time_scaling(0.5, cfg);
    EXPECT_NEAR(m.s, pi / 2, 1e-15);
    const auto b = time_scaling(1.0, cfg);
    EXPECT_NEAR(b.s, pi, 1e-15);
    EXPECT_NEAR(b.s_dot, 0.0, 1e-15);
}

TEST(TimeScaling, DerivativesMatchDifferences)
{
    TrajectoryConfig cfg;
    cfg.t0 = 0.25;
    cfg.tf = 1.75;
    const double h = 1e-6;
    for (double t = 0.3; t < 1.7; t += 0.1) {
        const auto c = time_scaling(t, cfg);
        const auto p = time_scaling(t + h, cfg), m = time_scaling(t - h, cfg);
        EXPECT_NEAR(c.s_dot, (p.s - m.s) / (2 * h), 1e-7);
        EXPECT_NEAR(c.s_ddot, (p.s_dot - m.s_dot) / (2 * h), 1e-6);
    }
}

TEST(TimeScaling, HoldsOutsideWindow)
{
    const TrajectoryConfig cfg;
    const auto before = time_scaling(-0.5, cfg);
    EXPECT_EQ(before.s, 0.0);
    const auto after = time_scaling(3.0, cfg);
    EXPECT_EQ(after.s, pi);
    EXPECT_EQ(after.s_dot, 0.0);
    EXPECT_EQ(after.s_ddot, 0.0);
}

TEST(CircleTarget, ReferencePoints)
{
    const TrajectoryConfig cfg;
    const auto a = circle_target(0.0, cfg);
    EXPECT_NEAR(a.Xd[0], 0.76, 1e-15);
    EXPECT_NEAR(a.Xd[1], 0.0, 1e-15);
    const auto m = circle_target(0.5, cfg);
    EXPECT_NEAR(m.Xd[0], 0.0, 1e-15);
    EXPECT_NEAR(m.Xd[1], 0.76, 1e-15);
    const auto b = circle_target(1.0, cfg);
    EXPECT_NEAR(b.Xd[0], -0.76, 1e-15);
    EXPECT_NEAR(b.Xd[1], 0.0, 1e-15);
    EXPECT_NEAR(b.Xd_dot.norm(), 0.0, 1e-15);
}

TEST(CircleTarget, ConstantRadiusAndConsistentDerivatives)
{
    const TrajectoryConfig cfg;
    const double h = 1e-6;
    for (double t = 0.01; t < 1.0; t += 0.049) {
        const auto c = circle_target(t, cfg);
        EXPECT_NEAR(c.Xd.norm(), 0.76, 1e-14);
        const auto p = circle_target(t + h, cfg), m = circle_target(t - h, cfg);
        EXPECT_LT((c.Xd_dot - (p.Xd - m.Xd) / (2 * h)).norm(), 1e-7);
        EXPECT_LT((c.Xd_ddot - (p.Xd_dot - m.Xd_dot) / (2 * h)).norm(), 1e-6);
    }
}

TEST(TargetAt, SetpointModeIsConstant)
{
    TrajectoryConfig cfg;
    cfg.mode = TrajectoryMode::setpoint;
    cfg.setpoint = TaskVec(0.5, 0.2);
    for (double t : {0.0, 0.3, 7.0}) {
        const auto s = target_at(t, cfg);
        EXPECT_EQ(s.Xd, cfg.setpoint);
        EXPECT_EQ(s.Xd_dot, TaskVec::Zero());
        EXPECT_EQ(s.Xd_ddot, TaskVec::Zero());
    }
}

TEST(TrajectoryConfig, RejectsEmptyWindowAndBadRadius)
{
    TrajectoryConfig cfg;
    cfg.tf = cfg.t0;
    EXPECT_THROW(cfg.validate(), ContractViolation);
    cfg = TrajectoryConfig{};
    cfg.radius = -1.0;
    EXPECT_THROW(cfg.validate(), ContractViolation);
}
