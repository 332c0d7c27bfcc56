#include <gtest/gtest.h>

#include "rftrack/config.hpp"

using namespace rftrack;

namespace {

int error_line(const std::string& text)
{
    try {
        parse_experiment(text, "t.yaml");
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_message(const std::string& text)
{
    try {
        parse_experiment(text, "t.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, BundledDefaultMatchesReference)
{
    const auto file = load_experiment(RFTRACK_SOURCE_DIR "/configs/default.yaml");
    const auto ref = reference_experiment();
    EXPECT_EQ(file.sim.model.link_lengths, ref.sim.model.link_lengths);
    EXPECT_EQ(file.sim.model.link_masses, ref.sim.model.link_masses);
    EXPECT_EQ(file.sim.model.com_offsets, ref.sim.model.com_offsets);
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(file.sim.model.link_inertias[i], ref.sim.model.link_inertias[i], 1e-15);
    EXPECT_EQ(file.sim.gains.Kp, ref.sim.gains.Kp);
    EXPECT_EQ(file.sim.gains.Kv, ref.sim.gains.Kv);
    EXPECT_EQ(file.sim.env.stiffness_uncertainty, ref.sim.env.stiffness_uncertainty);
    EXPECT_EQ(file.sim.dt, 1e-4);
    EXPECT_EQ(file.sweep.samples, 100);
}

TEST(Config, EmptyDocumentAppliesEveryDefault)
{
    const auto e = parse_experiment("", "empty");
    const auto ref = reference_experiment();
    EXPECT_EQ(e.sim.gains.Kp, ref.sim.gains.Kp);
    EXPECT_EQ(e.sim.traj.radius, 0.76);
    EXPECT_GT(e.defaults_applied.size(), 30u);
    bool saw = false;
    for (const auto& d : e.defaults_applied) saw = saw || d.rfind("gains.kp_n_per_m", 0) == 0;
    EXPECT_TRUE(saw);
}

TEST(Config, PartialSectionKeepsOtherDefaults)
{
    const auto e = parse_experiment("gains:\n  kp_n_per_m: [400, 600]\n");
    EXPECT_EQ(e.sim.gains.Kp(0, 0), 400.0);
    EXPECT_EQ(e.sim.gains.Kp(1, 1), 600.0);
    EXPECT_EQ(e.sim.gains.Kv(0, 0), 200.0);
}

TEST(Config, FullMatrixFormAccepted)
{
    const auto e = parse_experiment("gains:\n  kp_n_per_m: [[400, 0], [0, 600]]\n");
    EXPECT_EQ(e.sim.gains.Kp(1, 1), 600.0);
    EXPECT_EQ(error_line("gains:\n  kp_n_per_m: [[400, 1], [0, 600]]\n"), 2);
}

TEST(Config, UnknownKeyReportsLine)
{
    EXPECT_EQ(error_line("arm:\n  link_lengths_m: [0.3, 0.25, 0.21]\n  link_mass_kg: [1, 1, 1]\n"), 3);
    EXPECT_NE(error_message("arm:\n  link_mass_kg: [1, 1, 1]\n").find("link_mass_kg"), std::string::npos);
    EXPECT_EQ(error_line("simulation:\n  dt_s: 1e-4\ncontroller:\n  k: 1\n"), 3);
}

TEST(Config, NegativeMassRejected)
{
    EXPECT_GT(error_line("arm:\n  link_masses_kg: [1.0, -1.0, 0.5]\n"), 0);
}

TEST(Config, EmptyTrajectoryWindowRejected)
{
    EXPECT_GT(error_line("trajectory:\n  t0_s: 1.0\n  tf_s: 1.0\n"), 0);
    EXPECT_GT(error_line("trajectory:\n  t0_s: 2.0\n  tf_s: 1.0\n"), 0);
}

TEST(Config, WrongTypesRejected)
{
    EXPECT_EQ(error_line("simulation:\n  dt_s: fast\n"), 2);
    EXPECT_EQ(error_line("simulation:\n  log_stride: 2.5\n"), 2);
    EXPECT_EQ(error_line("gains:\n  kp_n_per_m: [1, 2, 3]\n"), 2);
    EXPECT_GT(error_line("arm: [1, 2]\n"), 0);
    EXPECT_GT(error_line("arm:\n  link_lengths_m: [0.3, 0.3\n"), 0);
}

TEST(Config, LinkListsMustAgree)
{
    EXPECT_GT(error_line("arm:\n  link_lengths_m: [0.3, 0.3]\n"), 0);
    const auto e = parse_experiment(
        "arm:\n  link_lengths_m: [0.4, 0.3]\n  link_masses_kg: [1, 1]\n"
        "trajectory:\n  radius_m: 0.7\n  theta_desired_rad: [3.14, 3.14]\n"
        "simulation:\n  theta0_rad: [0, 0]\n  theta_dot0_rad_per_s: [0, 0]\n");
    EXPECT_EQ(e.sim.model.dof(), 2);
    EXPECT_NEAR(e.sim.model.com_offsets[0], 0.2, 1e-15);
}

TEST(Config, EnumParsing)
{
    EXPECT_EQ(parse_integrator("semi_implicit_euler"), Integrator::semi_implicit_euler);
    EXPECT_THROW(parse_integrator("euler"), ContractViolation);
    const auto m = parse_sign_mode("boundary_layer:0.05");
    EXPECT_EQ(m.kind, SignMode::Kind::boundary_layer);
    EXPECT_EQ(m.epsilon, 0.05);
    EXPECT_EQ(parse_sign_mode("exact").kind, SignMode::Kind::exact);
    EXPECT_THROW(parse_sign_mode("boundary_layer:-1"), ContractViolation);
    EXPECT_EQ(to_string(parse_sign_mode("boundary_layer:0.05")), "boundary_layer:0.05");
}

TEST(Config, SweepSectionParsed)
{
    const auto e = parse_experiment(
        "sweep:\n  dke_bound_n_per_m: [10, 5]\n  samples: 7\n  seed: 42\n  pinned_dke_n_per_m: [3, -2]\n");
    EXPECT_EQ(e.sweep.samples, 7);
    EXPECT_EQ(e.sweep.seed, 42u);
    ASSERT_TRUE(e.sweep.pinned_dKe.has_value());
    EXPECT_EQ((*e.sweep.pinned_dKe)(1, 1), -2.0);
    EXPECT_GT(error_line("sweep:\n  samples: 0\n"), 0);
}

TEST(Config, MissingFileIsConfigError)
{
    EXPECT_THROW(load_experiment("/nonexistent/rftrack.yaml"), ConfigError);
}
