#include "planloop/selection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "planloop/errors.hpp"

namespace planloop {

namespace {

void require_candidates(std::span<const Trajectory> candidates, const char* who) {
  if (candidates.empty()) throw InvalidInput(std::string(who) + ": empty candidate list");
  validate(candidates.front(), 1);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    validate(candidates[i], 1);
    require_same_grid(candidates.front(), candidates[i]);
  }
}

// First index attaining the minimum; +inf scores never beat an earlier +inf.
std::size_t argmin_lowest(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] < scores[best]) best = i;
  }
  return best;
}

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

double mean_l2(const Trajectory& a, const Trajectory& b) {
  double sum = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) sum += std::hypot(a[t].x - b[t].x, a[t].y - b[t].y);
  return sum / static_cast<double>(a.size());
}

}  // namespace

std::string_view to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Directional: return "directional";
    case SelectorKind::SmoothSel: return "smoothsel";
    case SelectorKind::SoftMin: return "softmin";
    case SelectorKind::MaxCons: return "maxcons";
    case SelectorKind::Last: return "last";
    case SelectorKind::First: return "first";
  }
  return "unknown";
}

SelectorKind selector_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto kind : {SelectorKind::Directional, SelectorKind::SmoothSel, SelectorKind::SoftMin,
                    SelectorKind::MaxCons, SelectorKind::Last, SelectorKind::First}) {
    if (lower == to_string(kind)) return kind;
  }
  throw InvalidInput("unknown selector '" + std::string(name) + "'");
}

Selection select_directional(std::span<const Trajectory> candidates, double epsilon) {
  require_candidates(candidates, "select_directional");

  std::vector<DirectionVector> dirs;
  dirs.reserve(candidates.size());
  for (const auto& c : candidates) dirs.push_back(avg_direction(c, epsilon));

  const DirectionVector mean = mean_direction(dirs, epsilon);
  if (mean.degenerate) return {candidates.size() - 1, candidates.back(), true};

  std::vector<double> angles;
  angles.reserve(dirs.size());
  for (const auto& d : dirs) angles.push_back(std::acos(std::clamp(d.dot(mean), -1.0, 1.0)));

  const std::size_t best = argmin_lowest(angles);
  return {best, candidates[best]};
}

double heading_change_variance(const Trajectory& traj, double epsilon) {
  if (traj.size() < 3) return std::numeric_limits<double>::infinity();

  std::vector<double> headings;
  for (std::size_t t = 0; t + 1 < traj.size(); ++t) {
    const double ddx = traj[t + 1].x - traj[t].x;
    const double ddy = traj[t + 1].y - traj[t].y;
    if (std::hypot(ddx, ddy) < epsilon) continue;
    headings.push_back(std::atan2(ddy, ddx));
  }
  if (headings.size() < 2) return std::numeric_limits<double>::infinity();

  std::vector<double> changes;
  changes.reserve(headings.size() - 1);
  for (std::size_t i = 0; i + 1 < headings.size(); ++i) changes.push_back(wrap_angle(headings[i + 1] - headings[i]));

  double mean = 0.0;
  for (double c : changes) mean += c;
  mean /= static_cast<double>(changes.size());
  double var = 0.0;
  for (double c : changes) var += (c - mean) * (c - mean);
  return var / static_cast<double>(changes.size());
}

Selection select_smoothsel(std::span<const Trajectory> candidates, double epsilon) {
  require_candidates(candidates, "select_smoothsel");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(heading_change_variance(c, epsilon));
  const std::size_t best = argmin_lowest(scores);
  return {best, candidates[best]};
}

Selection select_softmin(std::span<const Trajectory> candidates, double temperature) {
  require_candidates(candidates, "select_softmin");
  if (!(temperature > 0.0)) throw InvalidInput("select_softmin: temperature must be positive");

  const std::size_t n = candidates.size();
  const std::size_t len = candidates.front().size();

  Trajectory mean = candidates.front();
  for (std::size_t t = 0; t < len; ++t) {
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& c : candidates) {
      sx += c[t].x;
      sy += c[t].y;
    }
    mean[t].x = sx / static_cast<double>(n);
    mean[t].y = sy / static_cast<double>(n);
  }

  std::vector<double> costs;
  costs.reserve(n);
  for (const auto& c : candidates) costs.push_back(mean_l2(c, mean));
  const double min_cost = *std::min_element(costs.begin(), costs.end());

  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::exp(-(costs[i] - min_cost) / temperature);
    total += weights[i];
  }
  for (auto& w : weights) w /= total;

  // Offset form keeps identical candidates bit-exact.
  const Trajectory& base = candidates.front();
  Trajectory blended = base;
  for (std::size_t t = 0; t < len; ++t) {
    double ox = 0.0;
    double oy = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      ox += weights[i] * (candidates[i][t].x - base[t].x);
      oy += weights[i] * (candidates[i][t].y - base[t].y);
    }
    blended[t].x = base[t].x + ox;
    blended[t].y = base[t].y + oy;
  }

  std::vector<double> distances;
  distances.reserve(n);
  for (const auto& c : candidates) distances.push_back(mean_l2(c, blended));
  return {argmin_lowest(distances), std::move(blended)};
}

Selection select_maxcons(std::span<const Trajectory> candidates, const DirectionVector& heading, double epsilon) {
  require_candidates(candidates, "select_maxcons");
  if (heading.degenerate || heading.norm() < kDegeneracyFloor) {
    return {candidates.size() - 1, candidates.back(), true};
  }

  std::vector<double> neg_alignment;
  neg_alignment.reserve(candidates.size());
  for (const auto& c : candidates) neg_alignment.push_back(-avg_direction(c, epsilon).dot(heading));
  const std::size_t best = argmin_lowest(neg_alignment);
  return {best, candidates[best]};
}

Selection select(SelectorKind kind, std::span<const Trajectory> candidates, const SelectorOptions& options) {
  switch (kind) {
    case SelectorKind::Directional: return select_directional(candidates, options.epsilon);
    case SelectorKind::SmoothSel: return select_smoothsel(candidates, options.epsilon);
    case SelectorKind::SoftMin: return select_softmin(candidates, options.softmin_temperature);
    case SelectorKind::MaxCons:
      return select_maxcons(candidates, options.heading.value_or(DirectionVector{0.0, 0.0, true}), options.epsilon);
    case SelectorKind::Last:
      require_candidates(candidates, "select(last)");
      return {candidates.size() - 1, candidates.back()};
    case SelectorKind::First:
      require_candidates(candidates, "select(first)");
      return {0, candidates.front()};
  }
  throw InvalidInput("select: unhandled selector kind");
}

}  // namespace planloop
