#include "planloop/direction.hpp"

#include <cmath>

#include "planloop/errors.hpp"

namespace planloop {

double DirectionVector::norm() const noexcept { return std::hypot(dx, dy); }

DirectionVector avg_direction(const Trajectory& traj, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("avg_direction: epsilon must be positive");
  validate(traj, 2);

  double sx = 0.0;
  double sy = 0.0;
  bool any_motion = false;
  for (std::size_t t = 0; t + 1 < traj.size(); ++t) {
    const double ddx = traj[t + 1].x - traj[t].x;
    const double ddy = traj[t + 1].y - traj[t].y;
    const double len = std::hypot(ddx, ddy);
    if (len >= epsilon) any_motion = true;
    sx += ddx / (len + epsilon);
    sy += ddy / (len + epsilon);
  }
  const double segments = static_cast<double>(traj.size() - 1);
  sx /= segments;
  sy /= segments;

  const double n = std::hypot(sx, sy);
  if (!any_motion || n < kDegeneracyFloor) return {0.0, 0.0, true};
  return {sx / n, sy / n, false};
}

DirectionVector mean_direction(std::span<const DirectionVector> dirs, double epsilon) {
  if (dirs.empty()) throw InvalidInput("mean_direction: empty direction list");
  if (!(epsilon > 0.0)) throw InvalidInput("mean_direction: epsilon must be positive");

  double sx = 0.0;
  double sy = 0.0;
  for (const auto& d : dirs) {
    sx += d.dx;
    sy += d.dy;
  }
  sx /= static_cast<double>(dirs.size());
  sy /= static_cast<double>(dirs.size());

  const double n = std::hypot(sx, sy);
  if (n < kDegeneracyFloor) return {0.0, 0.0, true};
  return {sx / (n + epsilon), sy / (n + epsilon), false};
}

}  // namespace planloop
