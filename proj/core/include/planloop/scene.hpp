#pragma once

#include <vector>

namespace planloop {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const noexcept { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const noexcept { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
  double dot(const Vec2& o) const noexcept { return x * o.x + y * o.y; }
  double norm() const noexcept;

  bool operator==(const Vec2&) const = default;
};

/// Footprint of a vehicle in meters. Defaults to a typical passenger car.
struct Extent {
  double length = 4.0;
  double width = 1.8;

  bool operator==(const Extent&) const = default;
};

/// World-frame vehicle state. Heading is kept in (-pi, pi].
struct AgentState {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  Extent extent;

  Vec2 velocity() const noexcept;
  bool operator==(const AgentState&) const = default;
};

/// State-level stand-in for a camera frame: the ego and every actor at `time`.
/// Actor order is stable across frames of the same run.
struct SceneState {
  double time = 0.0;
  AgentState ego;
  std::vector<AgentState> actors;

  bool operator==(const SceneState&) const = default;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle) noexcept;

/// World point expressed in the frame of `origin` (x forward, y left).
Vec2 to_local(const AgentState& origin, const Vec2& world) noexcept;
/// Inverse of to_local.
Vec2 to_world(const AgentState& origin, const Vec2& local) noexcept;

}  // namespace planloop
