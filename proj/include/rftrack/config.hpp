#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rftrack/simulator.hpp"

namespace rftrack {

struct SweepSettings {
    TaskMat dKe_bound = TaskMat::Zero();  // N/m, diagonal
    int samples = 100;
    std::uint64_t seed = 1;
    double convergence_band = 1e-3;      // m
    std::optional<TaskMat> pinned_dKe;   // forces every draw to this value
};

/// A complete experiment description as read from a config file.
struct Experiment {
    SimConfig sim;
    SweepSettings sweep;
    Vec theta_desired;  // recorded for provenance, no part of the law uses it
    /// "section.key = value" for every key filled from the defaults.
    std::vector<std::string> defaults_applied;
};

/// Configuration error anchored to a line of the source document (line 0
/// when the problem is not tied to one line).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

/// Three-link arm tracking the half circle, with every default value.
Experiment reference_experiment();

Experiment parse_experiment(std::string_view text, const std::string& source_name = "<config>");
Experiment load_experiment(const std::filesystem::path& path);

std::string to_string(Integrator integrator);
std::string to_string(const SignMode& mode);
Integrator parse_integrator(std::string_view name);
/// "exact", "boundary_layer" or "boundary_layer:<eps>".
SignMode parse_sign_mode(std::string_view name, double default_epsilon = 0.01);

}  // namespace rftrack
