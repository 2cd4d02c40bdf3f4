#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planloop/imaginer.hpp"
#include "planloop/loop.hpp"
#include "planloop/planner.hpp"
#include "planloop/tracker.hpp"
#include "planloop/world.hpp"

namespace planloop {

enum class ScenarioCategory { Stationary, Frontal, Side };
enum class ReferenceSpeedMode { SimulatedNoAction, Explicit };
enum class PlanningMode { AgentOnly, Imagine };

std::string_view to_string(ScenarioCategory category);
ScenarioCategory category_from_string(std::string_view name);
std::string_view to_string(PlanningMode mode);
PlanningMode mode_from_string(std::string_view name);

struct ScenarioSpec {
  std::string id;
  ScenarioCategory category = ScenarioCategory::Stationary;
  AgentState ego_init;
  Vec2 goal;
  std::vector<ActorScript> actors;
  double duration = 8.0;
  double dt = 0.1;
  ReferenceSpeedMode reference_mode = ReferenceSpeedMode::SimulatedNoAction;
  /// Used when reference_mode is Explicit.
  double reference_speed = 0.0;
  std::optional<Corridor> corridor;
  /// Speed the planner's progress term saturates at; 0 means the initial ego speed.
  double cruise_speed = 0.0;

  /// Throws InvalidInput on non-positive duration/dt or malformed actors.
  void validate() const;
  SceneState initial_state() const;
};

struct ClosedLoopOptions {
  double replan_hz = 2.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  SamplerConfig sampler;
  TrackerConfig tracker;
  ToyImaginerConfig imaginer;
  /// Replaces the toy sampling agent, e.g. with scripted test doubles.
  std::function<std::unique_ptr<DrivingAgent>(const ScenarioSpec&)> agent_factory;
};

struct LoopStat {
  double time = 0.0;
  int refinements_used = 0;
  std::optional<double> stop_tcr;
  bool stopped_early = false;
  std::size_t selected_index = 0;

  bool operator==(const LoopStat&) const = default;
};

struct TraceSample {
  double time = 0.0;
  AgentState ego;

  bool operator==(const TraceSample&) const = default;
};

struct ClosedLoopOutcome {
  std::string scenario_id;
  ScenarioCategory category = ScenarioCategory::Stationary;
  PlanningMode mode = PlanningMode::Imagine;
  bool collided = false;
  /// Relative speed magnitude at first contact; unset without collision.
  std::optional<double> impact_speed;
  double reference_speed = 0.0;
  std::optional<double> collision_time;
  std::optional<std::size_t> collision_actor;
  std::vector<TraceSample> ego_trace;
  std::vector<LoopStat> loop_stats;
  /// Some tracker command had to be clamped to actuator bounds.
  bool command_clamped = false;

  bool operator==(const ClosedLoopOutcome&) const = default;
};

struct Contact {
  bool collided = false;
  double time = 0.0;
  double impact_speed = 0.0;
  std::size_t actor = 0;
};

/// First contact between the ego and any actor, if there is one.
std::optional<Contact> first_contact(const SceneState& state);

/// Runs the scenario with the ego holding its initial speed and heading.
Contact simulate_no_action(const ScenarioSpec& scenario, std::optional<double> dt_override = std::nullopt);

/// Reference impact speed per the scenario's mode. Throws ScenarioInvalid
/// when the simulated no-action baseline never collides.
double reference_impact_speed(const ScenarioSpec& scenario);

/// Receding-horizon closed loop: replans at `replan_hz` (the planning loop
/// in Imagine mode, a single current-frame plan in AgentOnly mode) and tracks
/// the selected trajectory until the next tick. Stops at the first contact.
ClosedLoopOutcome run_closed_loop(const ScenarioSpec& scenario, PlanningMode mode, const LoopConfig& config,
                                  const ClosedLoopOptions& options = {});

}  // namespace planloop
