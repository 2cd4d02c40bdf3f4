#pragma once

#include <span>

#include "planloop/trajectory.hpp"

namespace planloop {

/// 2D direction. `degenerate` marks vectors whose pre-normalization norm fell
/// below kDegeneracyFloor; such vectors are zero.
struct DirectionVector {
  double dx = 0.0;
  double dy = 0.0;
  bool degenerate = false;

  double norm() const noexcept;
  double dot(const DirectionVector& other) const noexcept { return dx * other.dx + dy * other.dy; }

  bool operator==(const DirectionVector&) const = default;
};

/// Mean of the epsilon-normalized segment directions of `traj`, rescaled to
/// unit length. Degenerate when every displacement is shorter than epsilon or
/// the averaged vector vanishes.
DirectionVector avg_direction(const Trajectory& traj, double epsilon = kDefaultEpsilon);

/// Arithmetic mean of `dirs` divided by (|mean| + epsilon).
DirectionVector mean_direction(std::span<const DirectionVector> dirs, double epsilon = kDefaultEpsilon);

}  // namespace planloop
