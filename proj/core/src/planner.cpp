#include "planloop/planner.hpp"

#include <algorithm>
#include <cmath>

#include "planloop/errors.hpp"
#include "planloop/world.hpp"

namespace planloop {

namespace {

struct Rollout {
  Trajectory local;
  std::vector<AgentState> world;  // ego pose at each waypoint
};

Rollout roll_out(const AgentState& ego, double speed, double accel, double yaw_rate, const SamplerConfig& config) {
  Rollout out;
  out.local.waypoints.reserve(config.time_grid.size());
  out.world.reserve(config.time_grid.size());

  AgentState local_state;
  local_state.speed = speed;
  double t = 0.0;
  for (double target : config.time_grid) {
    const auto steps = static_cast<long>(std::lround((target - t) / config.rollout_dt));
    for (long k = 0; k < steps; ++k) advance_unicycle(local_state, accel, yaw_rate, config.rollout_dt);
    t = target;
    out.local.waypoints.push_back({target, local_state.position.x, local_state.position.y});

    AgentState w = ego;
    w.position = to_world(ego, local_state.position);
    w.heading = normalize_angle(ego.heading + local_state.heading);
    w.speed = local_state.speed;
    out.world.push_back(w);
  }
  return out;
}

std::size_t nearest_waypoint(const std::vector<double>& grid, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - t) < std::abs(grid[best] - t) - 1e-9) best = i;
  }
  return best;
}

}  // namespace

double pair_risk(const AgentState& ego, const AgentState& actor, double margin, double overlap_penalty) {
  if (check_collision(ego, actor)) return overlap_penalty;
  if (!(margin > 0.0)) return 0.0;
  const double gap = footprint_distance(ego, actor);
  return std::max(0.0, 1.0 - gap / margin);
}

std::vector<CandidateScore> score_candidates(const SceneState& current, double ego_speed, const Vec2& goal,
                                             std::optional<std::span<const SceneState>> imagined_keyframes,
                                             const SamplerConfig& config) {
  if (!std::isfinite(goal.x) || !std::isfinite(goal.y)) throw InvalidInput("toy_plan: goal must be finite");
  if (config.time_grid.empty() || config.accelerations.empty() || config.yaw_rates.empty()) {
    throw InvalidInput("toy_plan: empty lattice");
  }
  if (!(config.rollout_dt > 0.0)) throw InvalidInput("toy_plan: rollout_dt must be positive");

  const AgentState& ego = current.ego;
  const double horizon = config.time_grid.back();
  const double cap = std::max(config.cruise_speed * horizon, 1.0);
  const double start_gap = (goal - ego.position).norm();

  std::vector<CandidateScore> scores;
  scores.reserve(config.accelerations.size() * config.yaw_rates.size());
  for (double accel : config.accelerations) {
    for (double yaw_rate : config.yaw_rates) {
      Rollout r = roll_out(ego, std::max(0.0, ego_speed), accel, yaw_rate, config);
      CandidateScore c;
      c.accel = accel;
      c.yaw_rate = yaw_rate;

      const double gained = start_gap - (goal - r.world.back().position).norm();
      c.progress = std::min(gained, cap) / cap;
      c.comfort = std::abs(accel);

      for (const auto& pose : r.world) {
        for (const auto& actor : current.actors) {
          c.risk += pair_risk(pose, actor, config.safety_margin, config.overlap_penalty);
        }
        if (config.corridor && (pose.position.y < config.corridor->y_min || pose.position.y > config.corridor->y_max)) {
          c.boundary += config.overlap_penalty;
        }
      }
      if (imagined_keyframes && !imagined_keyframes->empty()) {
        // Each keyframe is a snapshot that holds from its aligned waypoint
        // until the next keyframe takes over.
        const auto& frames = *imagined_keyframes;
        for (std::size_t k = 0; k < frames.size(); ++k) {
          const std::size_t first = nearest_waypoint(config.time_grid, frames[k].time);
          std::size_t last = r.world.size();
          if (k + 1 < frames.size()) last = std::max(first + 1, nearest_waypoint(config.time_grid, frames[k + 1].time));
          for (std::size_t w = first; w < last; ++w) {
            for (const auto& actor : frames[k].actors) {
              c.risk += pair_risk(r.world[w], actor, config.safety_margin, config.overlap_penalty);
            }
          }
        }
      }

      c.score = config.progress_weight * c.progress - config.comfort_weight * c.comfort -
                config.risk_weight * (c.risk + c.boundary);
      c.trajectory = std::move(r.local);
      scores.push_back(std::move(c));
    }
  }
  return scores;
}

Trajectory toy_plan(const SceneState& current, double ego_speed, const Vec2& goal,
                    std::optional<std::span<const SceneState>> imagined_keyframes, const SamplerConfig& config) {
  auto scores = score_candidates(current, ego_speed, goal, imagined_keyframes, config);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].score > scores[best].score) best = i;
  }
  return std::move(scores[best].trajectory);
}

}  // namespace planloop
