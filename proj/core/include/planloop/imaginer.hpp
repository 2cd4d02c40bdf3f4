#pragma once

#include <cstddef>
#include <cstdint>

#include "planloop/loop.hpp"

namespace planloop {

struct ToyImaginerConfig {
  std::size_t frame_count = 25;
  double frame_rate_hz = 10.0;
};

/// Constant-velocity scene rollout. The ego follows `conditioning` exactly
/// (linear interpolation from the current pose); actors extrapolate the
/// velocity seen across the history window. `noise_std` adds seeded Gaussian
/// noise to imagined actor positions.
ImaginedSequence toy_imagine(const ObservationHistory& history, const Trajectory& conditioning, double noise_std,
                             std::uint64_t seed, const ToyImaginerConfig& config = {});

/// SceneImaginer backed by toy_imagine. Each call draws a fresh child seed
/// from the base seed and a call counter, so one instance must not be shared
/// between concurrent runs.
class ToyImaginer final : public SceneImaginer {
 public:
  ToyImaginer(double noise_std, std::uint64_t seed, ToyImaginerConfig config = {})
      : noise_std_(noise_std), seed_(seed), config_(config) {}

  ImaginedSequence imagine(const ObservationHistory& history, const Trajectory& conditioning) override;

  std::uint64_t calls() const noexcept { return calls_; }

 private:
  double noise_std_;
  std::uint64_t seed_;
  ToyImaginerConfig config_;
  std::uint64_t calls_ = 0;
};

}  // namespace planloop
