#include <gtest/gtest.h>

#include "rftrack/analysis.hpp"
#include "rftrack/sweep.hpp"
#include "support.hpp"

using namespace rftrack;

namespace {

SimConfig short_base()
{
    SimConfig c = reference_experiment().sim;
    c.t_end = 0.05;
    return c;
}

SweepSettings settings(int samples, std::uint64_t seed = 3)
{
    SweepSettings s = reference_experiment().sweep;
    s.samples = samples;
    s.seed = seed;
    return s;
}

}  // namespace

TEST(Sweep, DrawsStayWithinBoundAndAreSeeded)
{
    const auto base = short_base();
    const auto a = draw_stiffness_offsets(base, settings(500, 9));
    const auto b = draw_stiffness_offsets(base, settings(500, 9));
    const auto c = draw_stiffness_offsets(base, settings(500, 10));
    ASSERT_EQ(a.size(), 500u);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    for (const auto& d : a) {
        EXPECT_LE(std::abs(d[0]), 20.0);
        EXPECT_LE(std::abs(d[1]), 50.0);
    }
}

TEST(Sweep, DrawsClampedToNonNegativeStiffness)
{
    auto s = settings(500);
    s.dKe_bound = TaskVec(300, 300).asDiagonal();
    for (const auto& d : draw_stiffness_offsets(short_base(), s)) {
        EXPECT_GE(d[0], -100.0);
        EXPECT_GE(d[1], -100.0);
    }
}

TEST(Sweep, ZeroBoundGivesIdenticalSamples)
{
    auto s = settings(4);
    s.dKe_bound.setZero();
    const auto r = robustness_sweep(short_base(), s);
    ASSERT_EQ(r.samples.size(), 4u);
    for (const auto& x : r.samples) {
        EXPECT_EQ(x.dKe, TaskVec::Zero());
        EXPECT_EQ(x.final_error, r.samples[0].final_error);
        EXPECT_EQ(x.max_error, r.samples[0].max_error);
    }
}

TEST(Sweep, ParallelMatchesSerial)
{
    const auto s = settings(8);
    const auto par = robustness_sweep(short_base(), s);
    const auto ser = robustness_sweep_serial(short_base(), s);
    ASSERT_EQ(par.samples.size(), ser.samples.size());
    EXPECT_EQ(par.converged_count, ser.converged_count);
    for (std::size_t i = 0; i < par.samples.size(); ++i) {
        EXPECT_EQ(par.samples[i].index, static_cast<int>(i));
        EXPECT_EQ(par.samples[i].dKe, ser.samples[i].dKe);
        EXPECT_EQ(par.samples[i].final_error, ser.samples[i].final_error);
        EXPECT_EQ(par.samples[i].max_error, ser.samples[i].max_error);
    }
}

TEST(Sweep, PinnedSingleSampleMatchesDirectRun)
{
    auto s = settings(1);
    s.pinned_dKe = TaskMat(TaskVec(20, 50).asDiagonal());
    const auto base = short_base();
    const auto r = robustness_sweep(base, s);
    const auto m = tracking_metrics(run(base));
    ASSERT_EQ(r.samples.size(), 1u);
    EXPECT_EQ(r.samples[0].final_error, m.final_error);
    EXPECT_EQ(r.samples[0].max_error, m.max_error);
    EXPECT_EQ(r.samples[0].min_margin, 180.0);
    EXPECT_EQ(r.seed, 3u);
}

TEST(Sweep, DivergentSampleIsRecordedNotThrown)
{
    SimConfig base = short_base();
    base.gains.Kp = TaskVec(1e9, 1e9).asDiagonal();
    base.gains.Kv = TaskVec(1e7, 1e7).asDiagonal();
    base.dt = 1e-2;
    base.t_end = 50.0;
    const auto r = robustness_sweep(base, settings(2));
    ASSERT_EQ(r.samples.size(), 2u);
    for (const auto& x : r.samples) {
        EXPECT_TRUE(x.diverged);
        EXPECT_FALSE(x.converged);
    }
    EXPECT_FALSE(r.all_converged());
    EXPECT_EQ(r.convergence_rate(), 0.0);
}

TEST(Sweep, RejectsInvalidRequest)
{
    auto s = settings(0);
    EXPECT_THROW(robustness_sweep(short_base(), s), ContractViolation);
}
