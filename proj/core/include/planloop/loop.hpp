#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "planloop/scene.hpp"
#include "planloop/selection.hpp"
#include "planloop/trajectory.hpp"

namespace planloop {

/// Conditioning window for the imaginer: preceding frames plus the current
/// one, oldest first. The last frame is the current scene.
struct ObservationHistory {
  std::vector<SceneState> frames;

  const SceneState& current() const { return frames.back(); }
};

/// Imagined future frames. Frame times are offsets from plan time.
struct ImaginedSequence {
  std::vector<SceneState> frames;
};

/// Produces an ego-frame trajectory from the current scene and, during
/// refinement, imagined keyframes.
class DrivingAgent {
 public:
  virtual ~DrivingAgent() = default;

  virtual Trajectory plan(const SceneState& current, double ego_speed,
                          std::optional<std::span<const SceneState>> imagined_keyframes) = 0;

  /// Whether one instance may serve concurrent loop runs.
  virtual bool thread_safe() const { return false; }
};

/// Rolls the scene forward along a conditioning trajectory.
class SceneImaginer {
 public:
  virtual ~SceneImaginer() = default;

  virtual ImaginedSequence imagine(const ObservationHistory& history, const Trajectory& conditioning) = 0;

  virtual bool thread_safe() const { return false; }
};

struct BufferEntry {
  int iteration = 0;
  Trajectory trajectory;

  bool operator==(const BufferEntry&) const = default;
};

/// Append-only log of every trajectory produced in one loop run. Entry 0 is
/// the initial plan.
class TrajectoryBuffer {
 public:
  void push(Trajectory traj);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<BufferEntry>& entries() const noexcept { return entries_; }
  const Trajectory& latest() const;
  std::vector<Trajectory> trajectories() const;

  bool operator==(const TrajectoryBuffer&) const = default;

 private:
  std::vector<BufferEntry> entries_;
};

struct LoopConfig {
  double theta = 0.05;
  int max_refinements = 5;
  double epsilon = kDefaultEpsilon;
  std::vector<double> keyframe_offsets{0.5, 1.0};
  std::size_t window_length = 4;
  SelectorKind selector = SelectorKind::Directional;
  double softmin_temperature = 1.0;
  bool ess_enabled = true;
  bool tss_enabled = true;
  /// Plan once from the current frame only; no imagination.
  bool agent_only = false;

  /// Throws ConfigError on invalid values.
  void validate() const;
};

struct LoopResult {
  Trajectory selected;
  std::size_t selected_index = 0;
  TrajectoryBuffer buffer;
  int refinements_used = 0;
  bool stopped_early = false;
  /// Last min-TCR computed against earlier buffer entries, if any refinement ran.
  std::optional<double> stop_tcr;

  bool operator==(const LoopResult&) const = default;
};

struct StopCheck {
  bool stop = false;
  double min_tcr = 0.0;
};

/// Minimum TCR of the latest entry against every earlier one, and whether it
/// is below `theta`.
StopCheck should_stop(const TrajectoryBuffer& buffer, double theta, double epsilon = kDefaultEpsilon);

/// Nearest-timestamp frame for each offset; exact ties go to the earlier frame.
std::vector<SceneState> extract_keyframes(const ImaginedSequence& seq, std::span<const double> offsets);

/// Ego heading over the history window, in the current ego frame.
DirectionVector history_heading(const ObservationHistory& history);

/// Plan, imagine, refine; see README for the protocol.
LoopResult run_loop(DrivingAgent& agent, SceneImaginer& imaginer, const ObservationHistory& history,
                    double ego_speed, const LoopConfig& config);

}  // namespace planloop
