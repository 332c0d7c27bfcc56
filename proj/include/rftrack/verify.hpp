#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rftrack/config.hpp"

namespace rftrack {

/// Outcome of one numerical identity check. `value` is the worst observed
/// error measure; the check passes when value < tolerance.
struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

/// M, H, G obtained from energies alone: kinetic energy from propagated link
/// velocities, then Euler-Lagrange terms by central differences.
struct NumericalDynamics {
    Mat M;
    Vec H;
    Vec G;
};
NumericalDynamics numerical_dynamics(const JointState& s, const ArmModel& model, double step = 1e-5);

/// Fixed-setpoint copy of `base`: the target is held at the circle's start
/// point and the arm starts at rest, rotated about the base so the initial
/// task error is `initial_error`.
SimConfig regulation_variant(const SimConfig& base, double initial_error = 0.05, double t_end = 5.0);

/// Regulation run logged at every step of a fine grid, for rate identities.
SimConfig rate_check_variant(const SimConfig& base, double t_end = 2.0, double dt = 2e-5);

struct VerifyOptions {
    int random_states = 100;
    std::uint64_t seed = 7;
};

/// Jacobian finite differences, Euler-Lagrange oracle, skew symmetry,
/// potential gradient, energy rate and the Lyapunov rate identity.
std::vector<CheckResult> run_verification(const Experiment& exp, const VerifyOptions& opts = {});

/// Tolerance policy for the Lyapunov rate identity.
inline constexpr double kRateToleranceSmooth = 1e-3;
inline constexpr double kRateToleranceExact = 1e-2;
/// Exact-sign points with |sigma| below this are treated as crossings.
inline constexpr double kSigmaCrossingExclusion = 1e-3;
/// Rate comparisons ignore points where |dV/dt| is below this, W.
inline constexpr double kRateFloor = 1e-6;
/// Largest tolerated rise of V between logged rows, J.
inline constexpr double kMonotoneTolerance = 1e-8;
/// A regulation run must bring V below this fraction of its initial value.
inline constexpr double kLyapunovBandFraction = 1e-3;

}  // namespace rftrack
