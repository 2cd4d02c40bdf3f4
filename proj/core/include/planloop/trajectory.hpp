#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace planloop {

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr double kDegeneracyFloor = 1e-9;
inline constexpr std::size_t kDefaultQueryCount = 6;
inline constexpr double kDefaultWaypointSpacing = 0.5;

/// Ego-frame waypoint: x forward, y left, t seconds after plan time.
struct Waypoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Waypoint&) const = default;
};

struct Trajectory {
  std::vector<Waypoint> waypoints;

  std::size_t size() const noexcept { return waypoints.size(); }
  bool empty() const noexcept { return waypoints.empty(); }
  const Waypoint& operator[](std::size_t i) const { return waypoints[i]; }
  Waypoint& operator[](std::size_t i) { return waypoints[i]; }
  const Waypoint& back() const { return waypoints.back(); }

  bool operator==(const Trajectory&) const = default;
};

/// 0.5 s, 1.0 s, ... for `count` queries.
std::vector<double> default_time_grid(std::size_t count = kDefaultQueryCount,
                                      double spacing = kDefaultWaypointSpacing);

/// Builds a trajectory from parallel coordinate lists on the given grid.
Trajectory make_trajectory(std::span<const double> times, std::span<const double> xs,
                           std::span<const double> ys);

/// Throws InvalidInput unless the trajectory has at least `min_length`
/// waypoints, finite coordinates and strictly increasing positive times.
void validate(const Trajectory& traj, std::size_t min_length = 2);

/// Throws InvalidInput unless both trajectories share length and timestamps.
void require_same_grid(const Trajectory& a, const Trajectory& b);

/// Trajectory convergence ratio of `a` relative to `b`:
///   (1/N) * sum_t |a_t - b_t| / (|b_t| + epsilon)
/// Normalized by `b` only, so it is not symmetric.
double tcr(const Trajectory& a, const Trajectory& b, double epsilon = kDefaultEpsilon);

/// Smooth-L1 waypoint error averaged over all 2N coordinates.
double smooth_l1(const Trajectory& pred, const Trajectory& gt, double beta = 1.0);

}  // namespace planloop
