#pragma once

#include <optional>
#include <span>
#include <vector>

#include "planloop/loop.hpp"
#include "planloop/scene.hpp"
#include "planloop/trajectory.hpp"

namespace planloop {

/// World-frame lateral bounds of the drivable area (road runs along +x).
struct Corridor {
  double y_min = -1e9;
  double y_max = 1e9;

  bool operator==(const Corridor&) const = default;
};

/// Lattice sampler settings. Defaults: 5 accelerations x 7 yaw rates on the
/// 6 x 0.5 s grid, weights progress 1.0 / comfort 0.1 / risk 10.0.
struct SamplerConfig {
  std::vector<double> accelerations{-6.0, -3.0, -1.5, 0.0, 1.5};
  std::vector<double> yaw_rates{-0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6};
  std::vector<double> time_grid = default_time_grid();
  double rollout_dt = 0.1;
  /// Progress is capped at cruise_speed * horizon and normalized to [0, 1].
  double cruise_speed = 10.0;
  double progress_weight = 1.0;
  double comfort_weight = 0.1;
  double risk_weight = 10.0;
  /// Footprint inflation (m) below which the distance penalty ramps up.
  double safety_margin = 1.0;
  /// Risk charged per predicted footprint overlap or corridor exit.
  double overlap_penalty = 10.0;
  std::optional<Corridor> corridor;
};

struct CandidateScore {
  double accel = 0.0;
  double yaw_rate = 0.0;
  Trajectory trajectory;
  double progress = 0.0;  // normalized
  double comfort = 0.0;   // |accel|
  double risk = 0.0;      // actor terms
  double boundary = 0.0;  // corridor exits
  double score = 0.0;     // higher is better
};

/// Risk of one ego footprint against one actor footprint: `overlap_penalty`
/// on overlap, otherwise a linear ramp from 1 at contact to 0 at `margin`.
double pair_risk(const AgentState& ego, const AgentState& actor, double margin, double overlap_penalty);

/// Scores every lattice candidate (accel-major order). Current-frame actors
/// are treated as static over the whole horizon; each imagined keyframe adds
/// risk at the waypoint nearest its timestamp.
std::vector<CandidateScore> score_candidates(const SceneState& current, double ego_speed, const Vec2& goal,
                                             std::optional<std::span<const SceneState>> imagined_keyframes,
                                             const SamplerConfig& config);

/// Best-scoring candidate trajectory; lowest lattice index wins ties.
Trajectory toy_plan(const SceneState& current, double ego_speed, const Vec2& goal,
                    std::optional<std::span<const SceneState>> imagined_keyframes, const SamplerConfig& config = {});

/// DrivingAgent backed by toy_plan. Stateless, so safe to share.
class ToyAgent final : public DrivingAgent {
 public:
  ToyAgent(Vec2 goal, SamplerConfig config) : goal_(goal), config_(std::move(config)) {}

  Trajectory plan(const SceneState& current, double ego_speed,
                  std::optional<std::span<const SceneState>> imagined_keyframes) override {
    return toy_plan(current, ego_speed, goal_, imagined_keyframes, config_);
  }

  bool thread_safe() const override { return true; }

 private:
  Vec2 goal_;
  SamplerConfig config_;
};

}  // namespace planloop
