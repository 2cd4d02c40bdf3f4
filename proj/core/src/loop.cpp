#include "planloop/loop.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "planloop/errors.hpp"

namespace planloop {

namespace {

constexpr double kTimeTieTolerance = 1e-9;

void validate_history(const ObservationHistory& history, std::size_t window_length) {
  if (history.frames.empty()) throw InvalidInput("observation history is empty");
  if (history.frames.size() != window_length) {
    throw InvalidInput("observation history has " + std::to_string(history.frames.size()) +
                       " frames, expected " + std::to_string(window_length));
  }
  for (std::size_t i = 1; i < history.frames.size(); ++i) {
    if (!(history.frames[i].time > history.frames[i - 1].time)) {
      throw InvalidInput("observation history timestamps must be strictly increasing");
    }
  }
}

}  // namespace

void TrajectoryBuffer::push(Trajectory traj) {
  entries_.push_back({static_cast<int>(entries_.size()), std::move(traj)});
}

const Trajectory& TrajectoryBuffer::latest() const {
  if (entries_.empty()) throw InvalidInput("trajectory buffer is empty");
  return entries_.back().trajectory;
}

std::vector<Trajectory> TrajectoryBuffer::trajectories() const {
  std::vector<Trajectory> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.trajectory);
  return out;
}

void LoopConfig::validate() const {
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");
  if (max_refinements < 1) throw ConfigError("max_refinements must be at least 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (window_length < 1) throw ConfigError("window_length must be at least 1");
  if (!(softmin_temperature > 0.0)) throw ConfigError("softmin temperature must be positive");
  for (double o : keyframe_offsets) {
    if (!(o > 0.0)) throw ConfigError("keyframe offsets must be positive");
  }
}

StopCheck should_stop(const TrajectoryBuffer& buffer, double theta, double epsilon) {
  if (buffer.size() < 2) throw InvalidInput("should_stop needs at least two buffer entries");
  const auto& entries = buffer.entries();
  const Trajectory& latest = entries.back().trajectory;
  double min_tcr = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < entries.size(); ++j) {
    min_tcr = std::min(min_tcr, tcr(latest, entries[j].trajectory, epsilon));
  }
  return {min_tcr < theta, min_tcr};
}

std::vector<SceneState> extract_keyframes(const ImaginedSequence& seq, std::span<const double> offsets) {
  std::vector<SceneState> out;
  if (offsets.empty()) return out;
  if (seq.frames.empty()) throw ConfigError("imagined sequence is empty");

  const double horizon = seq.frames.back().time;
  out.reserve(offsets.size());
  for (double offset : offsets) {
    if (offset > horizon + kTimeTieTolerance) {
      throw ConfigError("keyframe offset " + std::to_string(offset) + " s is beyond the imagined horizon of " +
                        std::to_string(horizon) + " s");
    }
    std::size_t best = 0;
    double best_gap = std::abs(seq.frames[0].time - offset);
    for (std::size_t i = 1; i < seq.frames.size(); ++i) {
      const double gap = std::abs(seq.frames[i].time - offset);
      if (gap < best_gap - kTimeTieTolerance) {
        best = i;
        best_gap = gap;
      }
    }
    out.push_back(seq.frames[best]);
  }
  return out;
}

DirectionVector history_heading(const ObservationHistory& history) {
  if (history.frames.size() < 2) return {0.0, 0.0, true};
  const AgentState& now = history.frames.back().ego;
  const Vec2 first = to_local(now, history.frames.front().ego.position);
  const Vec2 last = to_local(now, now.position);
  const Vec2 d = last - first;
  const double n = d.norm();
  if (n < kDegeneracyFloor) return {0.0, 0.0, true};
  return {d.x / n, d.y / n, false};
}

LoopResult run_loop(DrivingAgent& agent, SceneImaginer& imaginer, const ObservationHistory& history,
                    double ego_speed, const LoopConfig& config) {
  config.validate();
  validate_history(history, config.window_length);
  const SceneState& current = history.current();

  LoopResult result;
  try {
    result.buffer.push(agent.plan(current, ego_speed, std::nullopt));
  } catch (const std::exception& e) {
    throw LoopError(0, "agent", e.what());
  }

  if (!config.agent_only) {
    for (int i = 1; i <= config.max_refinements; ++i) {
      ImaginedSequence imagined;
      try {
        imagined = imaginer.imagine(history, result.buffer.latest());
      } catch (const std::exception& e) {
        throw LoopError(i, "imaginer", e.what());
      }
      // Horizon violations are configuration errors and propagate unchanged.
      const std::vector<SceneState> keyframes = extract_keyframes(imagined, config.keyframe_offsets);
      try {
        result.buffer.push(agent.plan(current, ego_speed, std::span<const SceneState>(keyframes)));
      } catch (const std::exception& e) {
        throw LoopError(i, "agent", e.what());
      }
      result.refinements_used = i;

      const StopCheck check = should_stop(result.buffer, config.theta, config.epsilon);
      result.stop_tcr = check.min_tcr;
      if (config.ess_enabled && check.stop) {
        result.stopped_early = true;
        break;
      }
    }
  }

  if (config.tss_enabled && !config.agent_only) {
    // Newest first, so selector ties resolve to the latest refinement.
    std::vector<Trajectory> pool = result.buffer.trajectories();
    std::reverse(pool.begin(), pool.end());
    SelectorOptions options;
    options.epsilon = config.epsilon;
    options.softmin_temperature = config.softmin_temperature;
    options.heading = history_heading(history);
    Selection sel = select(config.selector, pool, options);
    if (sel.fallback) {
      // Degenerate directions default to the latest refinement, not the pool's tail.
      result.selected_index = result.buffer.size() - 1;
      result.selected = result.buffer.latest();
    } else {
      result.selected_index = pool.size() - 1 - sel.index;
      result.selected = std::move(sel.trajectory);
    }
  } else {
    result.selected_index = result.buffer.size() - 1;
    result.selected = result.buffer.latest();
  }
  return result;
}

}  // namespace planloop
