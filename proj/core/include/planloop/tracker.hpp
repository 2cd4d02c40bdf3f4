#pragma once

#include <vector>

#include "planloop/scene.hpp"
#include "planloop/trajectory.hpp"
#include "planloop/world.hpp"

namespace planloop {

struct TrackerConfig {
  double lookahead_time = 0.8;  // s of travel at current speed
  double min_lookahead = 2.0;   // m
};

/// Follows one ego-frame plan between replanning ticks: pure pursuit for
/// steering, the plan's implied speed profile for acceleration.
class TrajectoryTracker {
 public:
  TrajectoryTracker(const Trajectory& plan, const AgentState& origin, double plan_time, TrackerConfig config = {});

  EgoCommand command(const AgentState& ego, double now, double dt) const;

  /// Speed the plan implies at `tau` seconds after plan time.
  double desired_speed(double tau) const;

 private:
  std::vector<Vec2> path_;  // world frame, starts at the plan origin
  std::vector<double> profile_t_;
  std::vector<double> profile_v_;
  double plan_time_;
  TrackerConfig config_;
};

}  // namespace planloop
