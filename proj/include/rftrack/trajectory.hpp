#pragma once

#include "rftrack/types.hpp"

namespace rftrack {

/// Desired task-space motion at one instant.
struct TaskTarget {
    TaskVec Xd = TaskVec::Zero();       // m
    TaskVec Xd_dot = TaskVec::Zero();   // m/s
    TaskVec Xd_ddot = TaskVec::Zero();  // m/s^2
};

enum class TrajectoryMode { circle, setpoint };

struct TrajectoryConfig {
    TrajectoryMode mode = TrajectoryMode::circle;
    double radius = 0.76;  // m
    double t0 = 0.0;       // s
    double tf = 1.0;       // s
    bool hold_after_tf = true;
    TaskVec setpoint{0.76, 0.0};  // used in setpoint mode

    /// Throws ContractViolation unless tf > t0 and radius > 0.
    void validate() const;
};

/// Angle along the circle and its first two time derivatives.
struct TimeScaling {
    double s = 0.0;       // rad
    double s_dot = 0.0;   // rad/s
    double s_ddot = 0.0;  // rad/s^2
};

/// s(tau) = 3 pi tau^2 - 2 pi tau^3 with tau = (t - t0) / (tf - t0).
/// tau is clamped to [0, 1] when hold_after_tf is set (zero rates outside).
TimeScaling time_scaling(double t, const TrajectoryConfig& cfg);

/// Point on the circle of the configured radius, centred on the base.
TaskTarget circle_target(double t, const TrajectoryConfig& cfg);

/// circle_target or the constant setpoint, depending on cfg.mode.
TaskTarget target_at(double t, const TrajectoryConfig& cfg);

}  // namespace rftrack
