#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rftrack/analysis.hpp"
#include "rftrack/config.hpp"
#include "rftrack/sweep.hpp"

namespace rftrack {

/// Shortest-round-trip is not required; 17 significant digits always are.
std::string format_double(double v);

std::vector<std::string> trace_columns(int dof);
std::string trace_csv(const Trace& trace);

std::vector<std::string> sweep_columns();
std::string sweep_csv(const SweepReport& report);

nlohmann::ordered_json to_json(const SimConfig& cfg);
nlohmann::ordered_json to_json(const TrackingMetrics& m);
nlohmann::ordered_json to_json(const FeasibilityReport& r);
nlohmann::ordered_json run_manifest(const Experiment& exp, const Trace& trace, const TrackingMetrics& metrics);
nlohmann::ordered_json sweep_summary(const SweepReport& report);

/// End-effector path against the desired circle.
std::string path_svg(const Trace& trace);
/// Joint torques against time.
std::string torque_svg(const Trace& trace);

/// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace rftrack
