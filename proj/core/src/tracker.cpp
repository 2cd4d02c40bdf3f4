#include "planloop/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace planloop {

TrajectoryTracker::TrajectoryTracker(const Trajectory& plan, const AgentState& origin, double plan_time,
                                     TrackerConfig config)
    : plan_time_(plan_time), config_(config) {
  path_.push_back(origin.position);
  profile_t_.push_back(0.0);
  profile_v_.push_back(origin.speed);

  Waypoint prev{0.0, 0.0, 0.0};
  for (const auto& w : plan.waypoints) {
    path_.push_back(to_world(origin, {w.x, w.y}));
    const double span = w.t - prev.t;
    profile_t_.push_back(0.5 * (prev.t + w.t));
    profile_v_.push_back(std::hypot(w.x - prev.x, w.y - prev.y) / span);
    prev = w;
  }
}

double TrajectoryTracker::desired_speed(double tau) const {
  if (tau <= profile_t_.front()) return profile_v_.front();
  for (std::size_t i = 0; i + 1 < profile_t_.size(); ++i) {
    if (tau <= profile_t_[i + 1]) {
      const double s = (tau - profile_t_[i]) / (profile_t_[i + 1] - profile_t_[i]);
      return profile_v_[i] + s * (profile_v_[i + 1] - profile_v_[i]);
    }
  }
  return profile_v_.back();
}

EgoCommand TrajectoryTracker::command(const AgentState& ego, double now, double dt) const {
  EgoCommand cmd;
  const double target_speed = desired_speed(now - plan_time_ + dt);
  cmd.accel = std::clamp((target_speed - ego.speed) / dt, -kMaxAccel, kMaxAccel);

  // Closest point on the path, as (segment, fraction).
  std::size_t seg = 0;
  double frac = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path_.size(); ++i) {
    const Vec2 ab = path_[i + 1] - path_[i];
    const double len2 = ab.dot(ab);
    const double s = len2 > 0.0 ? std::clamp((ego.position - path_[i]).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = (ego.position - (path_[i] + ab * s)).norm();
    if (d < best) {
      best = d;
      seg = i;
      frac = s;
    }
  }

  const double lookahead = std::max(config_.min_lookahead, ego.speed * config_.lookahead_time);
  double remaining = lookahead;
  Vec2 target{};
  Vec2 last_dir{};
  bool found = false;
  for (std::size_t i = seg; i + 1 < path_.size(); ++i) {
    const Vec2 a = i == seg ? path_[i] + (path_[i + 1] - path_[i]) * frac : path_[i];
    const Vec2 ab = path_[i + 1] - a;
    const double len = ab.norm();
    if (len > 1e-9) last_dir = ab * (1.0 / len);
    if (len >= remaining && len > 0.0) {
      target = a + ab * (remaining / len);
      found = true;
      break;
    }
    remaining -= len;
  }
  if (!found) {
    if (last_dir.norm() == 0.0) return cmd;  // stationary plan: hold heading
    target = path_.back() + last_dir * remaining;
  }

  const Vec2 local = to_local(ego, target);
  const double dist = local.norm();
  if (dist < 1e-9 || ego.speed <= 0.0) return cmd;
  const double curvature = 2.0 * local.y / (dist * dist);
  cmd.yaw_rate = std::clamp(ego.speed * curvature, -kMaxYawRate, kMaxYawRate);
  return cmd;
}

}  // namespace planloop
