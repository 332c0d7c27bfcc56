#pragma once

#include <cstdint>
#include <vector>

#include "rftrack/config.hpp"

namespace rftrack {

struct SweepSample {
    int index = 0;
    TaskVec dKe = TaskVec::Zero();  // drawn diagonal of the stiffness uncertainty, N/m
    bool converged = false;         // final_error < band and no divergence
    bool diverged = false;
    double max_error = 0.0;    // m
    double final_error = 0.0;  // m
    double min_margin = 0.0;   // N/m, smallest Kp - Ke - dKe over the axes
};

struct SweepReport {
    std::vector<SweepSample> samples;  // in index order
    std::uint64_t seed = 0;
    TaskMat dKe_bound = TaskMat::Zero();
    double convergence_band = 0.0;
    int converged_count = 0;

    double convergence_rate() const
    {
        return samples.empty() ? 0.0 : static_cast<double>(converged_count) / samples.size();
    }
    bool all_converged() const { return converged_count == static_cast<int>(samples.size()); }
};

/// Uniform draws within +-bound per axis, clamped so Ke + dKe >= 0.
/// Deterministic in the seed; a pinned value replaces every draw.
std::vector<TaskVec> draw_stiffness_offsets(const SimConfig& base, const SweepSettings& settings);

/// One closed-loop run with the plant uncertainty replaced by dKe.
/// Divergence is reported in the sample, never thrown.
SweepSample evaluate_sample(const SimConfig& base, const TaskVec& dKe, double band, int index);

/// Samples run concurrently with OpenMP. Bit-identical to the serial version.
SweepReport robustness_sweep(const SimConfig& base, const SweepSettings& settings);

/// Reference implementation, one sample after another.
SweepReport robustness_sweep_serial(const SimConfig& base, const SweepSettings& settings);

}  // namespace rftrack
