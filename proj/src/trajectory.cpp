#include "rftrack/trajectory.hpp"

#include <cmath>
#include <numbers>

namespace rftrack {

void TrajectoryConfig::validate() const
{
    if (!(std::isfinite(t0) && std::isfinite(tf) && tf > t0))
        throw ContractViolation("trajectory needs tf > t0");
    if (!(std::isfinite(radius) && radius > 0.0))
        throw ContractViolation("trajectory radius must be positive");
    if (!setpoint.allFinite()) throw ContractViolation("setpoint must be finite");
}

TimeScaling time_scaling(double t, const TrajectoryConfig& cfg)
{
    constexpr double pi = std::numbers::pi;
    const double span = cfg.tf - cfg.t0;
    const double tau = (t - cfg.t0) / span;
    if (cfg.hold_after_tf && tau <= 0.0) return {};
    if (cfg.hold_after_tf && tau >= 1.0) return {pi, 0.0, 0.0};
    return {
        3.0 * pi * tau * tau - 2.0 * pi * tau * tau * tau,
        6.0 * pi * tau * (1.0 - tau) / span,
        6.0 * pi * (1.0 - 2.0 * tau) / (span * span),
    };
}

TaskTarget circle_target(double t, const TrajectoryConfig& cfg)
{
    const auto [s, sd, sdd] = time_scaling(t, cfg);
    const double r = cfg.radius;
    const TaskVec radial(std::cos(s), std::sin(s));
    const TaskVec tangent(-std::sin(s), std::cos(s));
    TaskTarget tgt;
    tgt.Xd = r * radial;
    tgt.Xd_dot = r * sd * tangent;
    tgt.Xd_ddot = r * sdd * tangent - r * sd * sd * radial;
    return tgt;
}

TaskTarget target_at(double t, const TrajectoryConfig& cfg)
{
    if (cfg.mode == TrajectoryMode::setpoint) return {cfg.setpoint, TaskVec::Zero(), TaskVec::Zero()};
    return circle_target(t, cfg);
}

}  // namespace rftrack
