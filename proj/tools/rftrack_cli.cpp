// rftrack: closed-loop simulation, gain checks, robustness sweeps and
// identity verification for the robust position/force tracking controller.
//
// Exit codes: 0 success, 1 configuration error, 2 divergence, 3 gain
// conditions violated, 4 sweep with non-converged samples, 5 failed
// verification check.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rftrack/analysis.hpp"
#include "rftrack/config.hpp"
#include "rftrack/output.hpp"
#include "rftrack/sweep.hpp"
#include "rftrack/verify.hpp"

namespace fs = std::filesystem;
using namespace rftrack;

namespace {

enum Exit : int { kOk = 0, kConfigError = 1, kDiverged = 2, kGainsFailed = 3, kSweepFailed = 4, kVerifyFailed = 5 };

struct Overrides {
    std::string config;
    std::string out = "out";
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<std::string> integrator;
    std::optional<std::string> sign_mode;
};

Experiment load(const Overrides& o, std::ostream& log)
{
    Experiment exp = o.config.empty() ? parse_experiment("", "<defaults>") : load_experiment(o.config);
    for (const auto& d : exp.defaults_applied) log << "default: " << d << "\n";
    try {
        if (o.dt) exp.sim.dt = *o.dt;
        if (o.integrator) exp.sim.integrator = parse_integrator(*o.integrator);
        if (o.sign_mode) exp.sim.gains.sign_mode = parse_sign_mode(*o.sign_mode, exp.sim.gains.sign_mode.epsilon);
        if (o.samples) exp.sweep.samples = *o.samples;
        if (o.seed) exp.sweep.seed = *o.seed;
        if (exp.sweep.samples < 1) throw ContractViolation("--samples must be at least 1");
        exp.sim.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError("command line", 0, e.what());
    }
    return exp;
}

void print_feasibility(const FeasibilityReport& r)
{
    std::printf("axis  margin Kp-Ke-dKe [N/m]  Kv>0\n");
    std::printf("x     %22.6g  %s\n", r.margin[0], r.damping_ok ? "yes" : "-");
    std::printf("y     %22.6g  %s\n", r.margin[1], r.damping_ok ? "yes" : "-");
    std::printf("stiffness condition: %s\n", r.stiffness_ok ? "PASS" : "FAIL");
    std::printf("damping condition:   %s\n", r.damping_ok ? "PASS" : "FAIL");
    std::printf("gain conditions:     %s\n", r.passed() ? "PASS" : "FAIL");
}

int cmd_simulate(const Overrides& o)
{
    std::ostringstream log;
    const Experiment exp = load(o, log);
    std::cerr << log.str();
    const fs::path out(o.out);
    fs::create_directories(out);

    Trace trace;
    int code = kOk;
    try {
        trace = run(exp.sim);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        log << "divergence: " << e.what() << "\n";
        if (e.partial_trace()) trace = *e.partial_trace();
        trace.diverged = true;
        code = kDiverged;
    }
    for (const auto& w : trace.warnings) {
        std::cerr << "warning: " << w << "\n";
        log << "warning: " << w << "\n";
    }

    const TrackingMetrics metrics = trace.rows.empty() ? TrackingMetrics{} : tracking_metrics(trace);
    write_file_atomic(out / "trace.csv", trace_csv(trace));
    write_file_atomic(out / "metadata.json", run_manifest(exp, trace, metrics).dump(2) + "\n");
    if (!trace.rows.empty()) {
        write_file_atomic(out / "end_effector_path.svg", path_svg(trace));
        write_file_atomic(out / "joint_torques.svg", torque_svg(trace));
    }
    write_file_atomic(out / "run.log", log.str());

    std::printf("rows %zu, max error %s m, final error %s m, max torque %s N m\n", trace.rows.size(),
                format_double(metrics.max_error).c_str(), format_double(metrics.final_error).c_str(),
                format_double(metrics.max_torque).c_str());
    return code;
}

int cmd_check_gains(const Overrides& o)
{
    std::ostringstream log;
    const Experiment exp = load(o, log);
    std::cerr << log.str();
    const auto r = check_gain_conditions(exp.sim.gains, exp.sweep.dKe_bound);
    print_feasibility(r);
    return r.passed() ? kOk : kGainsFailed;
}

int cmd_sweep(const Overrides& o)
{
    std::ostringstream log;
    const Experiment exp = load(o, log);
    std::cerr << log.str();
    const fs::path out(o.out);
    fs::create_directories(out);

    const SweepReport report = robustness_sweep(exp.sim, exp.sweep);
    const auto summary = sweep_summary(report);
    write_file_atomic(out / "sweep.csv", sweep_csv(report));
    write_file_atomic(out / "sweep_summary.json", summary.dump(2) + "\n");
    write_file_atomic(out / "run.log", log.str());
    std::printf("%d/%zu samples converged (band %s m), worst final error %s m\n", report.converged_count,
                report.samples.size(), format_double(report.convergence_band).c_str(),
                format_double(summary["worst_final_error_m"].get<double>()).c_str());
    return report.all_converged() ? kOk : kSweepFailed;
}

int cmd_verify(const Overrides& o)
{
    std::ostringstream log;
    const Experiment exp = load(o, log);
    std::cerr << log.str();
    const auto results = run_verification(exp);
    bool ok = true;
    std::printf("%-38s %-12s %-10s %s\n", "check", "value", "tolerance", "result");
    for (const auto& r : results) {
        std::printf("%-38s %-12.4g %-10.3g %s  %s\n", r.name.c_str(), r.value, r.tolerance,
                    r.passed ? "PASS" : "FAIL", r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Robust position/force tracking for constrained planar arms"};
    app.require_subcommand(1);
    Overrides o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", o.config, "Experiment config (YAML); defaults when omitted");
        cmd->add_option("--dt", o.dt, "Integrator step [s]");
        cmd->add_option("--integrator", o.integrator, "rk4 | semi_implicit_euler");
        cmd->add_option("--sign-mode", o.sign_mode, "exact | boundary_layer[:eps]");
    };

    auto* simulate = app.add_subcommand("simulate", "Run the closed loop and write trace, manifest and plots");
    add_common(simulate);
    simulate->add_option("--out", o.out, "Output directory");

    auto* gains = app.add_subcommand("check-gains", "Evaluate the gain conditions at the stiffness bound");
    add_common(gains);

    auto* sweep = app.add_subcommand("sweep", "Seeded robustness sweep over the stiffness uncertainty");
    add_common(sweep);
    sweep->add_option("--out", o.out, "Output directory");
    sweep->add_option("--samples", o.samples, "Number of draws");
    sweep->add_option("--seed", o.seed, "Random seed");

    auto* verify = app.add_subcommand("verify", "Run the numerical identity checks");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(o);
        if (gains->parsed()) return cmd_check_gains(o);
        if (sweep->parsed()) return cmd_sweep(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ContractViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}
