#include "planloop/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "planloop/errors.hpp"

namespace planloop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

AgentState from_segment(const ScheduleWaypoint& a, const ScheduleWaypoint& b, double t, const Extent& extent) {
  const double span = b.t - a.t;
  const double s = (t - a.t) / span;
  const Vec2 d{b.x - a.x, b.y - a.y};
  AgentState out;
  out.position = {a.x + s * d.x, a.y + s * d.y};
  out.speed = d.norm() / span;
  out.heading = out.speed > 0.0 ? normalize_angle(std::atan2(d.y, d.x)) : 0.0;
  out.extent = extent;
  return out;
}

AgentState schedule_state(const WaypointScheduleScript& script, double t) {
  const auto& pts = script.points;
  if (pts.empty()) throw InvalidInput("waypoint schedule is empty");
  if (pts.size() == 1) return AgentState{{pts[0].x, pts[0].y}, 0.0, 0.0, script.extent};

  if (t <= pts.front().t) return from_segment(pts[0], pts[1], t, script.extent);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (t <= pts[i + 1].t) return from_segment(pts[i], pts[i + 1], t, script.extent);
  }
  // Past the end: hold the final point, keep the last heading.
  AgentState held = from_segment(pts[pts.size() - 2], pts.back(), pts.back().t, script.extent);
  held.speed = 0.0;
  return held;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + ab * s)).norm();
}

}  // namespace

AgentState actor_state_at(const ActorScript& script, double t) {
  return std::visit(overloaded{
                        [t](const ConstantVelocityScript& s) {
                          AgentState out = s.initial;
                          out.position = s.initial.position + s.initial.velocity() * t;
                          return out;
                        },
                        [t](const WaypointScheduleScript& s) { return schedule_state(s, t); },
                    },
                    script);
}

void advance_unicycle(AgentState& agent, double accel, double yaw_rate, double dt) noexcept {
  // Speed and heading update first; the position then advances by the exact
  // constant-acceleration distance, including a mid-step stop at zero speed.
  const double v0 = agent.speed;
  const double v1 = v0 + accel * dt;
  double distance = 0.5 * (v0 + v1) * dt;
  if (v1 < 0.0) distance = accel < 0.0 ? 0.5 * v0 * v0 / -accel : 0.0;
  agent.speed = std::max(0.0, v1);
  agent.heading = normalize_angle(agent.heading + yaw_rate * dt);
  agent.position = agent.position + Vec2{std::cos(agent.heading), std::sin(agent.heading)} * distance;
}

StepResult step_world(const SceneState& state, std::span<const ActorScript> scripts, EgoCommand command, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("step_world: dt must be positive");
  if (!scripts.empty() && scripts.size() != state.actors.size()) {
    throw InvalidInput("step_world: script count does not match actor count");
  }

  StepResult out{state, false};
  const double accel = std::clamp(command.accel, -kMaxAccel, kMaxAccel);
  const double yaw_rate = std::clamp(command.yaw_rate, -kMaxYawRate, kMaxYawRate);
  out.clamped = accel != command.accel || yaw_rate != command.yaw_rate;

  advance_unicycle(out.state.ego, accel, yaw_rate, dt);

  out.state.time = state.time + dt;
  for (std::size_t i = 0; i < out.state.actors.size(); ++i) {
    if (scripts.empty()) {
      auto& a = out.state.actors[i];
      a.position = a.position + a.velocity() * dt;
    } else {
      out.state.actors[i] = actor_state_at(scripts[i], out.state.time);
    }
  }
  return out;
}

std::array<Vec2, 4> footprint(const AgentState& agent) {
  const double hl = 0.5 * agent.extent.length;
  const double hw = 0.5 * agent.extent.width;
  return {to_world(agent, {hl, hw}), to_world(agent, {-hl, hw}), to_world(agent, {-hl, -hw}),
          to_world(agent, {hl, -hw})};
}

bool check_collision(const AgentState& a, const AgentState& b) {
  const auto ca = footprint(a);
  const auto cb = footprint(b);
  const std::array<Vec2, 4> axes{Vec2{std::cos(a.heading), std::sin(a.heading)},
                                 Vec2{-std::sin(a.heading), std::cos(a.heading)},
                                 Vec2{std::cos(b.heading), std::sin(b.heading)},
                                 Vec2{-std::sin(b.heading), std::cos(b.heading)}};
  for (const auto& axis : axes) {
    double amin = std::numeric_limits<double>::infinity();
    double amax = -amin;
    double bmin = amin;
    double bmax = -amin;
    for (const auto& p : ca) {
      const double d = p.dot(axis);
      amin = std::min(amin, d);
      amax = std::max(amax, d);
    }
    for (const auto& p : cb) {
      const double d = p.dot(axis);
      bmin = std::min(bmin, d);
      bmax = std::max(bmax, d);
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

double footprint_distance(const AgentState& a, const AgentState& b) {
  if (check_collision(a, b)) return 0.0;
  const auto ca = footprint(a);
  const auto cb = footprint(b);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(ca[i], cb[j], cb[(j + 1) % 4]));
      best = std::min(best, point_segment_distance(cb[i], ca[j], ca[(j + 1) % 4]));
    }
  }
  return best;
}

}  // namespace planloop
