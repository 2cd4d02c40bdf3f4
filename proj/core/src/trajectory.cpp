#include "planloop/trajectory.hpp"

#include <cmath>
#include <string>

#include "planloop/errors.hpp"

namespace planloop {

namespace {

constexpr double kGridTolerance = 1e-9;

}  // namespace

std::vector<double> default_time_grid(std::size_t count, double spacing) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = spacing * static_cast<double>(i + 1);
  return grid;
}

Trajectory make_trajectory(std::span<const double> times, std::span<const double> xs,
                           std::span<const double> ys) {
  if (times.size() != xs.size() || times.size() != ys.size()) {
    throw InvalidInput("make_trajectory: coordinate lists differ in length");
  }
  Trajectory traj;
  traj.waypoints.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) traj.waypoints.push_back({times[i], xs[i], ys[i]});
  return traj;
}

void validate(const Trajectory& traj, std::size_t min_length) {
  if (traj.size() < min_length) {
    throw InvalidInput("trajectory needs at least " + std::to_string(min_length) + " waypoints, got " +
                       std::to_string(traj.size()));
  }
  double prev_t = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& w = traj[i];
    if (!std::isfinite(w.t) || !std::isfinite(w.x) || !std::isfinite(w.y)) {
      throw InvalidInput("trajectory waypoint " + std::to_string(i) + " is not finite");
    }
    if (w.t <= prev_t) {
      throw InvalidInput("trajectory timestamps must be positive and strictly increasing");
    }
    prev_t = w.t;
  }
}

void require_same_grid(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("trajectory length mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].t - b[i].t) > kGridTolerance) {
      throw InvalidInput("trajectory timestamp grids differ at waypoint " + std::to_string(i));
    }
  }
}

double tcr(const Trajectory& a, const Trajectory& b, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("tcr: epsilon must be positive");
  validate(a, 1);
  validate(b, 1);
  require_same_grid(a, b);

  double sum = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double diff = std::hypot(a[t].x - b[t].x, a[t].y - b[t].y);
    sum += diff / (std::hypot(b[t].x, b[t].y) + epsilon);
  }
  return sum / static_cast<double>(a.size());
}

double smooth_l1(const Trajectory& pred, const Trajectory& gt, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("smooth_l1: beta must be positive");
  validate(pred, 1);
  validate(gt, 1);
  require_same_grid(pred, gt);

  auto term = [beta](double d) {
    const double ad = std::abs(d);
    return ad < beta ? 0.5 * d * d / beta : ad - 0.5 * beta;
  };
  double sum = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    sum += term(pred[t].x - gt[t].x) + term(pred[t].y - gt[t].y);
  }
  return sum / static_cast<double>(2 * pred.size());
}

}  // namespace planloop
