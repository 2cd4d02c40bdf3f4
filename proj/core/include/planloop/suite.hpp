#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "planloop/closed_loop.hpp"
#include "planloop/loop.hpp"
#include "planloop/metrics.hpp"

namespace planloop {

inline constexpr std::uint64_t kDefaultSuiteSeed = 20240917;

/// Seeded procedural suite: `per_category` stationary, frontal and side
/// scenarios whose no-action baseline always collides. Frontal and side
/// conflicts only become visible in the current frame shortly before contact.
std::vector<ScenarioSpec> make_default_suite(std::uint64_t seed = kDefaultSuiteSeed, std::size_t per_category = 20);

/// One logged open-loop sample: what the planner sees plus the ground truth.
struct OpenLoopSample {
  std::string id;
  ObservationHistory history;
  double ego_speed = 0.0;
  Vec2 goal;
  double cruise_speed = 0.0;
  std::optional<Corridor> corridor;
  Trajectory gt;
  std::vector<OccupancyFrame> occupancy;  // ego frame at plan time, on the gt grid
};

/// Samples snapshots from `suite` (no-action rollouts) and labels each with a
/// privileged plan that sees the true actor futures at every waypoint.
std::vector<OpenLoopSample> make_openloop_dataset(const std::vector<ScenarioSpec>& suite, std::size_t count,
                                                  std::uint64_t seed, std::size_t window_length = 4);

void to_json(nlohmann::json& j, const OpenLoopSample& s);
void from_json(const nlohmann::json& j, OpenLoopSample& s);

}  // namespace planloop
