#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "planloop/scene.hpp"

namespace planloop {

inline constexpr double kMaxAccel = 6.0;     // m/s^2
inline constexpr double kMaxYawRate = 0.6;   // rad/s

/// Actor moving at a fixed velocity from its t = 0 state.
struct ConstantVelocityScript {
  AgentState initial;
};

struct ScheduleWaypoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const ScheduleWaypoint&) const = default;
};

/// Actor following timed world-frame waypoints with linear interpolation.
/// Before the first waypoint it extrapolates the first segment backwards;
/// after the last one it holds position.
struct WaypointScheduleScript {
  std::vector<ScheduleWaypoint> points;
  Extent extent;
};

using ActorScript = std::variant<ConstantVelocityScript, WaypointScheduleScript>;

/// State of a scripted actor at absolute scenario time `t`.
AgentState actor_state_at(const ActorScript& script, double t);

struct EgoCommand {
  double accel = 0.0;
  double yaw_rate = 0.0;
};

/// One unicycle step for a single vehicle; see step_world.
void advance_unicycle(AgentState& agent, double accel, double yaw_rate, double dt) noexcept;

struct StepResult {
  SceneState state;
  /// True when the command was outside the actuator bounds and got clamped.
  bool clamped = false;
};

/// Advances the ego with unicycle kinematics (speed and heading updated
/// first, position by the constant-acceleration distance along the new
/// heading) and moves scripted actors to the new time. With no scripts,
/// actors keep their current velocity. Speed never goes below zero.
StepResult step_world(const SceneState& state, std::span<const ActorScript> scripts, EgoCommand command, double dt);

/// Corners of the oriented footprint, counter-clockwise from front-left.
std::array<Vec2, 4> footprint(const AgentState& agent);

/// Separating-axis overlap test of two oriented rectangles. Touching counts as overlap.
bool check_collision(const AgentState& a, const AgentState& b);

/// Euclidean gap between two footprints; 0 when they overlap.
double footprint_distance(const AgentState& a, const AgentState& b);

}  // namespace planloop
