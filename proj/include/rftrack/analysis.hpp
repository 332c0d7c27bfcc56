#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "rftrack/simulator.hpp"

namespace rftrack {

/// Energy of the error system. V = T + P - P0 with T the arm's kinetic
/// energy and P = 1/2 Y^T K1 Y, Y = X - Xd, K1 = Kp - Ke - dKe evaluated
/// with the true plant stiffness.
struct LyapunovSample {
    double V = 0.0;  // J
    double T = 0.0;  // J
    double P = 0.0;  // J
    double dV_fd = std::numeric_limits<double>::quiet_NaN();   // W
    double dV_rhs = std::numeric_limits<double>::quiet_NaN();  // W
};

double potential_energy(const TaskVec& Y, const TaskMat& K1);

/// dP/dtheta = J^T K1 Y.
Vec potential_gradient(const Vec& theta, const TaskVec& Xd, const ArmModel& model, const TaskMat& K1);

/// Fills V, T, P. The monotonicity contract only applies to fixed targets.
LyapunovSample lyapunov_value(const JointState& s, const TaskTarget& target, const ArmModel& model,
                              const ControllerGains& gains, const EnvironmentModel& env,
                              double P0 = 0.0);

/// -Ydot^T K2 Ydot - Ydot^T Ydot K sigma sgn(sigma).
double dissipation_rate(const TaskVec& Y_dot, double sigma, const ControllerGains& gains);

/// dissipation_rate with Ydot = J theta_dot - Xd_dot.
double lyapunov_rate_rhs(const JointState& s, const TaskTarget& target, const ArmModel& model,
                         const ControllerGains& gains);

struct RatePoint {
    double t = 0.0;
    double dV_fd = 0.0;
    double dV_rhs = 0.0;
    double sigma = 0.0;
};

enum class Stencil { three_point, five_point };

/// Central difference of the logged V against the logged right-hand side,
/// at every row with a full, uniformly spaced stencil. The five-point
/// stencil is exact for quartics, which matters right after a start from
/// rest where dV/dt grows like t^2.
std::vector<RatePoint> lyapunov_rate_comparison(const Trace& trace,
                                                Stencil stencil = Stencil::three_point);

struct RateAgreement {
    double worst_relative_error = 0.0;
    double worst_time = 0.0;
    int compared = 0;
    int skipped = 0;
};

/// Relative error |fd - rhs| / max(|rhs|, floor) over points with
/// |rhs| > floor. With sigma_exclusion > 0, points whose neighbouring rows
/// straddle a sigma sign change, or with |sigma| below the exclusion, are
/// skipped (used for the exact sign mode).
RateAgreement rate_agreement(const std::vector<RatePoint>& points, double floor = 1e-6,
                             double sigma_exclusion = 0.0);

struct MonotonicityResult {
    bool non_increasing = true;
    double worst_increase = 0.0;  // J, largest V(t+) - V(t)
    double worst_time = 0.0;
    double V_initial = 0.0;
    double V_final = 0.0;
    bool reached_band = false;  // V_final <= band_fraction * V_initial

    bool passed() const { return non_increasing && reached_band; }
};

/// V must never rise by more than tol between logged rows and must decay to
/// band_fraction of its initial value by the end of the trace.
MonotonicityResult check_monotone(const Trace& trace, double tol = 1e-8, double band_fraction = 1e-3);

struct TrackingMetrics {
    double max_error = 0.0;    // m
    double rms_error = 0.0;    // m
    double final_error = 0.0;  // m
    double max_torque = 0.0;   // N m, largest |U_i|
    double torque_variation = 0.0;  // N m, total variation summed over joints
    std::optional<double> settling_time;  // s
};

struct MetricsOptions {
    /// Error statistics use rows with t >= window_start.
    double window_start = -std::numeric_limits<double>::infinity();
    /// Settling time is the first t after which the error stays below this.
    double settling_band = 1e-3;
};

/// Throws ContractViolation on an empty trace.
TrackingMetrics tracking_metrics(const Trace& trace, const MetricsOptions& opts = {});

}  // namespace rftrack
