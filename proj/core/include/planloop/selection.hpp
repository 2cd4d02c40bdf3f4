#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "planloop/direction.hpp"
#include "planloop/trajectory.hpp"

namespace planloop {

enum class SelectorKind { Directional, SmoothSel, SoftMin, MaxCons, Last, First };

std::string_view to_string(SelectorKind kind);
/// Case-insensitive; throws InvalidInput on unknown names.
SelectorKind selector_from_string(std::string_view name);

struct Selection {
  std::size_t index = 0;
  Trajectory trajectory;
  bool fallback = false;  // set when a degenerate direction forced the last-candidate default
};

/// Picks the candidate whose average direction makes the smallest angle with
/// the mean direction of all candidates. Falls back to the last candidate when
/// the mean direction is degenerate.
Selection select_directional(std::span<const Trajectory> candidates, double epsilon = kDefaultEpsilon);

/// Population variance of signed heading changes between consecutive
/// non-degenerate segments; +inf when fewer than one heading change exists.
double heading_change_variance(const Trajectory& traj, double epsilon = kDefaultEpsilon);

/// Lowest heading-change variance wins.
Selection select_smoothsel(std::span<const Trajectory> candidates, double epsilon = kDefaultEpsilon);

/// Soft-min weighted average of the candidates, weighted by their mean L2
/// distance to the pointwise-mean trajectory. The returned trajectory is the
/// average; `index` is the candidate closest to it.
Selection select_softmin(std::span<const Trajectory> candidates, double temperature = 1.0);

/// Candidate best aligned (max dot product) with `heading`; last candidate
/// when the heading is degenerate.
Selection select_maxcons(std::span<const Trajectory> candidates, const DirectionVector& heading,
                         double epsilon = kDefaultEpsilon);

struct SelectorOptions {
  double epsilon = kDefaultEpsilon;
  double softmin_temperature = 1.0;
  /// Required by MaxCons; a missing heading is treated as degenerate.
  std::optional<DirectionVector> heading;
};

Selection select(SelectorKind kind, std::span<const Trajectory> candidates, const SelectorOptions& options = {});

}  // namespace planloop
