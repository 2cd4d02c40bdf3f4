#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "planloop/closed_loop.hpp"
#include "planloop/scene.hpp"
#include "planloop/trajectory.hpp"

namespace planloop {

struct NnsInput {
  bool collided = false;
  double impact_speed = 0.0;
  double reference_speed = 0.0;
};

/// NeuroNCAP score: 5 without collision, else 4 * max(0, 1 - v_i / v_r).
double nns(const NnsInput& input);
double nns(const ClosedLoopOutcome& outcome);

struct PdmsSubscores {
  double nc = 1.0;
  double dac = 1.0;
  double ttc = 1.0;
  double comfort = 1.0;
  double ep = 1.0;
};

struct PdmsWeights {
  double ep = 5.0;
  double ttc = 5.0;
  double comfort = 2.0;
};

/// (nc * dac) times the weighted average of ep, ttc and comfort.
double pdms(const PdmsSubscores& sub, const PdmsWeights& weights = {});

enum class L2Convention {
  PrefixAverage,  // mean error over all waypoints with t <= h
  AtHorizon,      // error at the last waypoint with t <= h
};

std::vector<double> open_loop_l2(const Trajectory& pred, const Trajectory& gt, std::span<const double> horizons,
                                 L2Convention convention = L2Convention::PrefixAverage);

/// Actor footprints at one grid time, in the ego frame at plan time.
struct OccupancyFrame {
  double t = 0.0;
  std::vector<AgentState> actors;

  bool operator==(const OccupancyFrame&) const = default;
};

struct CollisionSample {
  Trajectory pred;
  std::vector<OccupancyFrame> occupancy;
  Extent ego_extent;
};

/// Waypoint index of the first predicted overlap, if any.
std::optional<std::size_t> first_overlap(const CollisionSample& sample);

/// Percentage of samples whose predicted footprint overlaps an actor at any
/// waypoint with t <= h (cumulative).
std::vector<double> open_loop_collision_rate(std::span<const CollisionSample> samples, std::span<const double> horizons);

struct SuiteRow {
  std::string category;  // "Avg." or a category name
  std::size_t scenarios = 0;
  std::size_t collisions = 0;
  double mean_nns = 0.0;
  double collision_rate_pct = 0.0;

  bool operator==(const SuiteRow&) const = default;
};

struct SuiteSummary {
  /// "Avg." first, then stationary / frontal / side for categories present.
  std::vector<SuiteRow> rows;

  const SuiteRow& row(std::string_view category) const;
};

SuiteSummary aggregate_suite(std::span<const ClosedLoopOutcome> outcomes);

/// Header: category,scenarios,collisions,mean_nns,collision_rate_pct
std::string suite_csv_header();
std::string suite_csv_row(const SuiteRow& row);
nlohmann::json suite_json(const SuiteSummary& summary);

/// Fixed-point formatting used by every report so outputs are byte-stable.
std::string format_fixed(double value, int decimals = 6);

}  // namespace planloop
