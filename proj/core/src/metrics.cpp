#include "planloop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "planloop/errors.hpp"
#include "planloop/world.hpp"

namespace planloop {

namespace {

constexpr double kGridTolerance = 1e-9;

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput(std::string("pdms: subscore ") + name + " outside [0, 1]");
}

// Number of leading waypoints with t <= h; throws if h is outside the grid.
std::size_t prefix_length(const Trajectory& traj, double h) {
  if (h < traj[0].t - kGridTolerance || h > traj.back().t + kGridTolerance) {
    throw InvalidInput("horizon " + format_fixed(h, 3) + " s is outside the trajectory grid");
  }
  std::size_t n = 0;
  while (n < traj.size() && traj[n].t <= h + kGridTolerance) ++n;
  return n;
}

const OccupancyFrame* frame_at(const std::vector<OccupancyFrame>& occupancy, double t) {
  const OccupancyFrame* best = nullptr;
  for (const auto& f : occupancy) {
    if (!best || std::abs(f.t - t) < std::abs(best->t - t) - kGridTolerance) best = &f;
  }
  return best;
}

}  // namespace

double nns(const NnsInput& input) {
  if (!input.collided) return 5.0;
  if (!(input.reference_speed > 0.0)) throw InvalidInput("nns: reference speed must be positive on collision");
  if (!(input.impact_speed >= 0.0)) throw InvalidInput("nns: impact speed must be non-negative");
  return 4.0 * std::max(0.0, 1.0 - input.impact_speed / input.reference_speed);
}

double nns(const ClosedLoopOutcome& outcome) {
  return nns(NnsInput{outcome.collided, outcome.impact_speed.value_or(0.0), outcome.reference_speed});
}

double pdms(const PdmsSubscores& sub, const PdmsWeights& weights) {
  require_unit_interval(sub.nc, "nc");
  require_unit_interval(sub.dac, "dac");
  require_unit_interval(sub.ttc, "ttc");
  require_unit_interval(sub.comfort, "comfort");
  require_unit_interval(sub.ep, "ep");
  if (!(weights.ep > 0.0) || !(weights.ttc > 0.0) || !(weights.comfort > 0.0)) {
    throw InvalidInput("pdms: weights must be positive");
  }
  const double penalties = sub.nc * sub.dac;
  const double weighted = (weights.ep * sub.ep + weights.ttc * sub.ttc + weights.comfort * sub.comfort) /
                          (weights.ep + weights.ttc + weights.comfort);
  return penalties * weighted;
}

std::vector<double> open_loop_l2(const Trajectory& pred, const Trajectory& gt, std::span<const double> horizons,
                                 L2Convention convention) {
  validate(pred, 1);
  validate(gt, 1);
  require_same_grid(pred, gt);

  std::vector<double> out;
  out.reserve(horizons.size());
  for (double h : horizons) {
    const std::size_t n = prefix_length(gt, h);
    if (n == 0) throw InvalidInput("horizon precedes the first waypoint");
    if (convention == L2Convention::AtHorizon) {
      out.push_back(std::hypot(pred[n - 1].x - gt[n - 1].x, pred[n - 1].y - gt[n - 1].y));
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += std::hypot(pred[i].x - gt[i].x, pred[i].y - gt[i].y);
    out.push_back(sum / static_cast<double>(n));
  }
  return out;
}

std::optional<std::size_t> first_overlap(const CollisionSample& sample) {
  double heading = 0.0;
  Waypoint prev{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < sample.pred.size(); ++k) {
    const Waypoint& w = sample.pred[k];
    const double dx = w.x - prev.x;
    const double dy = w.y - prev.y;
    if (std::hypot(dx, dy) > kGridTolerance) heading = std::atan2(dy, dx);
    prev = w;

    const OccupancyFrame* frame = frame_at(sample.occupancy, w.t);
    if (!frame) continue;
    const AgentState ego{{w.x, w.y}, heading, 0.0, sample.ego_extent};
    for (const auto& actor : frame->actors) {
      if (check_collision(ego, actor)) return k;
    }
  }
  return std::nullopt;
}

std::vector<double> open_loop_collision_rate(std::span<const CollisionSample> samples, std::span<const double> horizons) {
  std::vector<double> out(horizons.size(), 0.0);
  if (samples.empty()) return out;
  for (const auto& sample : samples) {
    const auto hit = first_overlap(sample);
    if (!hit) continue;
    const double hit_time = sample.pred[*hit].t;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      if (hit_time <= horizons[h] + kGridTolerance) out[h] += 1.0;
    }
  }
  for (auto& v : out) v = 100.0 * v / static_cast<double>(samples.size());
  return out;
}

const SuiteRow& SuiteSummary::row(std::string_view category) const {
  for (const auto& r : rows) {
    if (r.category == category) return r;
  }
  throw InvalidInput("suite summary has no row '" + std::string(category) + "'");
}

SuiteSummary aggregate_suite(std::span<const ClosedLoopOutcome> outcomes) {
  if (outcomes.empty()) throw InvalidInput("aggregate_suite: no outcomes");

  auto summarize = [&](std::string name, std::optional<ScenarioCategory> filter) {
    SuiteRow row;
    row.category = std::move(name);
    double nns_sum = 0.0;
    for (const auto& o : outcomes) {
      if (filter && o.category != *filter) continue;
      ++row.scenarios;
      if (o.collided) ++row.collisions;
      nns_sum += nns(o);
    }
    if (row.scenarios > 0) {
      row.mean_nns = nns_sum / static_cast<double>(row.scenarios);
      row.collision_rate_pct = 100.0 * static_cast<double>(row.collisions) / static_cast<double>(row.scenarios);
    }
    return row;
  };

  SuiteSummary summary;
  summary.rows.push_back(summarize("Avg.", std::nullopt));
  for (auto c : {ScenarioCategory::Stationary, ScenarioCategory::Frontal, ScenarioCategory::Side}) {
    SuiteRow row = summarize(std::string(to_string(c)), c);
    if (row.scenarios > 0) summary.rows.push_back(std::move(row));
  }
  return summary;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out(buf);
  // Fold "-0.000" to "0.000".
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string suite_csv_header() { return "category,scenarios,collisions,mean_nns,collision_rate_pct"; }

std::string suite_csv_row(const SuiteRow& row) {
  return row.category + "," + std::to_string(row.scenarios) + "," + std::to_string(row.collisions) + "," +
         format_fixed(row.mean_nns) + "," + format_fixed(row.collision_rate_pct);
}

nlohmann::json suite_json(const SuiteSummary& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : summary.rows) {
    rows.push_back({{"category", r.category},
                    {"scenarios", r.scenarios},
                    {"collisions", r.collisions},
                    {"mean_nns", r.mean_nns},
                    {"collision_rate_pct", r.collision_rate_pct}});
  }
  return rows;
}

}  // namespace planloop
