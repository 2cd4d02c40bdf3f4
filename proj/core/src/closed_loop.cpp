#include "planloop/closed_loop.hpp"

#include <cmath>
#include <deque>

#include "planloop/errors.hpp"
#include "planloop/rng.hpp"

namespace planloop {

namespace {

// Time is re-derived from the step count so long and dense runs do not drift.
void place_actors(SceneState& state, const ScenarioSpec& scenario, double time) {
  state.time = time;
  for (std::size_t i = 0; i < state.actors.size(); ++i) state.actors[i] = actor_state_at(scenario.actors[i], time);
}

}  // namespace

std::string_view to_string(ScenarioCategory category) {
  switch (category) {
    case ScenarioCategory::Stationary: return "stationary";
    case ScenarioCategory::Frontal: return "frontal";
    case ScenarioCategory::Side: return "side";
  }
  return "unknown";
}

ScenarioCategory category_from_string(std::string_view name) {
  if (name == "stationary") return ScenarioCategory::Stationary;
  if (name == "frontal") return ScenarioCategory::Frontal;
  if (name == "side") return ScenarioCategory::Side;
  throw InvalidInput("unknown scenario category '" + std::string(name) + "'");
}

std::string_view to_string(PlanningMode mode) {
  switch (mode) {
    case PlanningMode::AgentOnly: return "agent_only";
    case PlanningMode::Imagine: return "imagine";
  }
  return "unknown";
}

PlanningMode mode_from_string(std::string_view name) {
  if (name == "agent_only") return PlanningMode::AgentOnly;
  if (name == "imagine") return PlanningMode::Imagine;
  throw InvalidInput("unknown planning mode '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
  if (!(duration > 0.0)) throw InvalidInput("scenario " + id + ": duration must be positive");
  if (!(dt > 0.0)) throw InvalidInput("scenario " + id + ": dt must be positive");
  if (!(ego_init.extent.length > 0.0) || !(ego_init.extent.width > 0.0) || ego_init.speed < 0.0) {
    throw InvalidInput("scenario " + id + ": invalid ego state");
  }
  if (!std::isfinite(goal.x) || !std::isfinite(goal.y)) throw InvalidInput("scenario " + id + ": goal not finite");
  if (reference_mode == ReferenceSpeedMode::Explicit && !(reference_speed > 0.0)) {
    throw InvalidInput("scenario " + id + ": explicit reference speed must be positive");
  }
  for (const auto& script : actors) {
    if (const auto* s = std::get_if<WaypointScheduleScript>(&script)) {
      if (s->points.empty()) throw InvalidInput("scenario " + id + ": empty actor schedule");
      for (std::size_t i = 1; i < s->points.size(); ++i) {
        if (!(s->points[i].t > s->points[i - 1].t)) {
          throw InvalidInput("scenario " + id + ": actor schedule times must increase");
        }
      }
    }
  }
}

SceneState ScenarioSpec::initial_state() const {
  SceneState s;
  s.time = 0.0;
  s.ego = ego_init;
  s.ego.heading = normalize_angle(s.ego.heading);
  for (const auto& script : actors) s.actors.push_back(actor_state_at(script, 0.0));
  return s;
}

std::optional<Contact> first_contact(const SceneState& state) {
  for (std::size_t i = 0; i < state.actors.size(); ++i) {
    if (check_collision(state.ego, state.actors[i])) {
      return Contact{true, state.time, (state.ego.velocity() - state.actors[i].velocity()).norm(), i};
    }
  }
  return std::nullopt;
}

Contact simulate_no_action(const ScenarioSpec& scenario, std::optional<double> dt_override) {
  scenario.validate();
  const double dt = dt_override.value_or(scenario.dt);
  SceneState state = scenario.initial_state();
  if (auto c = first_contact(state)) return *c;

  const auto steps = static_cast<long>(std::lround(scenario.duration / dt));
  for (long k = 0; k < steps; ++k) {
    state = step_world(state, scenario.actors, EgoCommand{}, dt).state;
    place_actors(state, scenario, static_cast<double>(k + 1) * dt);
    if (auto c = first_contact(state)) return *c;
  }
  return {};
}

double reference_impact_speed(const ScenarioSpec& scenario) {
  if (scenario.reference_mode == ReferenceSpeedMode::Explicit) return scenario.reference_speed;
  const Contact baseline = simulate_no_action(scenario);
  if (!baseline.collided || !(baseline.impact_speed > 0.0)) {
    throw ScenarioInvalid("scenario " + scenario.id + ": no-action baseline does not collide");
  }
  return baseline.impact_speed;
}

ClosedLoopOutcome run_closed_loop(const ScenarioSpec& scenario, PlanningMode mode, const LoopConfig& config,
                                  const ClosedLoopOptions& options) {
  scenario.validate();
  config.validate();
  if (!(options.replan_hz > 0.0)) throw InvalidInput("replan_hz must be positive");

  ClosedLoopOutcome out;
  out.scenario_id = scenario.id;
  out.category = scenario.category;
  out.mode = mode;
  out.reference_speed = reference_impact_speed(scenario);

  SamplerConfig sampler = options.sampler;
  sampler.cruise_speed = scenario.cruise_speed > 0.0 ? scenario.cruise_speed : scenario.ego_init.speed;
  if (scenario.corridor) sampler.corridor = scenario.corridor;

  std::unique_ptr<DrivingAgent> agent = options.agent_factory ? options.agent_factory(scenario)
                                                              : std::make_unique<ToyAgent>(scenario.goal, sampler);
  ToyImaginer imaginer(options.noise_std, derive_seed(options.seed, hash_string(scenario.id)), options.imaginer);

  LoopConfig loop_config = config;
  loop_config.agent_only = mode == PlanningMode::AgentOnly;

  const double dt = scenario.dt;
  SceneState state = scenario.initial_state();

  // Pre-roll so the first plan already has a full conditioning window.
  std::deque<SceneState> window;
  for (std::size_t k = config.window_length - 1; k >= 1; --k) {
    SceneState past = state;
    past.time = -static_cast<double>(k) * dt;
    past.ego.position = state.ego.position - state.ego.velocity() * (static_cast<double>(k) * dt);
    for (std::size_t i = 0; i < past.actors.size(); ++i) past.actors[i] = actor_state_at(scenario.actors[i], past.time);
    window.push_back(std::move(past));
  }
  window.push_back(state);

  out.ego_trace.push_back({state.time, state.ego});
  if (auto c = first_contact(state)) {
    out.collided = true;
    out.impact_speed = c->impact_speed;
    out.collision_time = c->time;
    out.collision_actor = c->actor;
    return out;
  }

  const auto steps = static_cast<long>(std::lround(scenario.duration / dt));
  const long tick_steps = std::max(1L, static_cast<long>(std::lround(1.0 / (options.replan_hz * dt))));
  std::optional<TrajectoryTracker> tracker;

  for (long k = 0; k < steps; ++k) {
    if (k % tick_steps == 0) {
      ObservationHistory history{{window.begin(), window.end()}};
      const LoopResult result = run_loop(*agent, imaginer, history, state.ego.speed, loop_config);
      out.loop_stats.push_back(
          {state.time, result.refinements_used, result.stop_tcr, result.stopped_early, result.selected_index});
      tracker.emplace(result.selected, state.ego, state.time, options.tracker);
    }

    const EgoCommand cmd = tracker->command(state.ego, state.time, dt);
    StepResult step = step_world(state, scenario.actors, cmd, dt);
    out.command_clamped = out.command_clamped || step.clamped;
    state = std::move(step.state);
    place_actors(state, scenario, static_cast<double>(k + 1) * dt);

    window.push_back(state);
    while (window.size() > config.window_length) window.pop_front();
    out.ego_trace.push_back({state.time, state.ego});

    if (auto c = first_contact(state)) {
      out.collided = true;
      out.impact_speed = c->impact_speed;
      out.collision_time = c->time;
      out.collision_actor = c->actor;
      break;
    }
  }
  return out;
}

}  // namespace planloop
