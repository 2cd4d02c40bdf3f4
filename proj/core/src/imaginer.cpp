#include "planloop/imaginer.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "planloop/errors.hpp"
#include "planloop/rng.hpp"

namespace planloop {

namespace {

// Ego-frame pose along the conditioning path at time `tau`.
AgentState follow_path(const Trajectory& path, const AgentState& origin, double tau) {
  Waypoint prev{0.0, 0.0, 0.0};
  Waypoint next = path[0];
  std::size_t i = 0;
  while (i + 1 < path.size() && tau > path[i].t) {
    prev = path[i];
    next = path[i + 1];
    ++i;
  }
  const double span = next.t - prev.t;
  const double s = (tau - prev.t) / span;
  const Vec2 d{next.x - prev.x, next.y - prev.y};
  const Vec2 local{prev.x + s * d.x, prev.y + s * d.y};

  AgentState ego = origin;
  ego.position = to_world(origin, local);
  ego.speed = d.norm() / span;
  if (d.norm() > 0.0) ego.heading = normalize_angle(origin.heading + std::atan2(d.y, d.x));
  return ego;
}

}  // namespace

ImaginedSequence toy_imagine(const ObservationHistory& history, const Trajectory& conditioning, double noise_std,
                             std::uint64_t seed, const ToyImaginerConfig& config) {
  if (history.frames.empty()) throw InvalidInput("toy_imagine: empty observation history");
  if (noise_std < 0.0) throw InvalidInput("toy_imagine: noise_std must be non-negative");
  if (config.frame_count == 0 || !(config.frame_rate_hz > 0.0)) throw InvalidInput("toy_imagine: bad frame config");
  validate(conditioning, 1);

  const SceneState& now = history.frames.back();
  const SceneState& oldest = history.frames.front();
  const double window = now.time - oldest.time;

  std::vector<Vec2> velocities;
  velocities.reserve(now.actors.size());
  for (std::size_t a = 0; a < now.actors.size(); ++a) {
    if (history.frames.size() >= 2 && window > 0.0 && oldest.actors.size() == now.actors.size()) {
      velocities.push_back((now.actors[a].position - oldest.actors[a].position) * (1.0 / window));
    } else {
      velocities.push_back(now.actors[a].velocity());
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_std > 0.0 ? noise_std : 1.0);

  ImaginedSequence seq;
  seq.frames.reserve(config.frame_count);
  for (std::size_t k = 0; k < config.frame_count; ++k) {
    const double tau = static_cast<double>(k + 1) / config.frame_rate_hz;
    SceneState frame;
    frame.time = tau;
    frame.ego = follow_path(conditioning, now.ego, tau);
    frame.actors.reserve(now.actors.size());
    for (std::size_t a = 0; a < now.actors.size(); ++a) {
      AgentState actor = now.actors[a];
      const Vec2& v = velocities[a];
      actor.position = actor.position + v * tau;
      if (noise_std > 0.0) {
        const double nx = noise(rng);
        const double ny = noise(rng);
        actor.position = actor.position + Vec2{nx, ny};
      }
      actor.speed = v.norm();
      if (actor.speed > kDegeneracyFloor) actor.heading = normalize_angle(std::atan2(v.y, v.x));
      frame.actors.push_back(actor);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

ImaginedSequence ToyImaginer::imagine(const ObservationHistory& history, const Trajectory& conditioning) {
  const std::uint64_t call_seed = derive_seed(seed_, calls_++);
  return toy_imagine(history, conditioning, noise_std_, call_seed, config_);
}

}  // namespace planloop
