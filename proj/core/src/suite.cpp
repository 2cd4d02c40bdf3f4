#include "planloop/suite.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "planloop/errors.hpp"
#include "planloop/json_io.hpp"
#include "planloop/planner.hpp"
#include "planloop/rng.hpp"

namespace planloop {

namespace {

constexpr double kLaneWidth = 3.5;
constexpr double kDuration = 8.0;
constexpr int kMaxAttempts = 200;

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }

 private:
  std::mt19937_64 rng_;
};

ScenarioSpec base_scenario(std::string id, ScenarioCategory category, double ego_speed) {
  ScenarioSpec s;
  s.id = std::move(id);
  s.category = category;
  s.ego_init = AgentState{{0.0, 0.0}, 0.0, ego_speed, Extent{}};
  s.goal = {400.0, 0.0};
  s.duration = kDuration;
  s.dt = 0.1;
  s.corridor = Corridor{-0.85 * kLaneWidth, 1.3 * kLaneWidth};
  s.cruise_speed = ego_speed;
  return s;
}

ScenarioSpec stationary(Draw& d, const std::string& id) {
  const double v = d.uniform(9.0, 13.0);
  ScenarioSpec s = base_scenario(id, ScenarioCategory::Stationary, v);
  const double contact_time = d.uniform(2.5, 4.5);
  AgentState parked{{v * contact_time + 4.0, d.uniform(-0.5, 0.5)}, d.uniform(-0.2, 0.2), 0.0, Extent{}};
  s.actors.push_back(ConstantVelocityScript{parked});
  if (d.coin()) {
    // Harmless parked car on the far side of the road.
    AgentState far{{d.uniform(15.0, 60.0), 1.6 * kLaneWidth}, 0.0, 0.0, Extent{}};
    s.actors.push_back(ConstantVelocityScript{far});
  }
  return s;
}

ScenarioSpec frontal(Draw& d, const std::string& id) {
  const double v = d.uniform(9.0, 13.0);
  ScenarioSpec s = base_scenario(id, ScenarioCategory::Frontal, v);
  const double u = d.uniform(6.0, 10.0);
  const double contact_time = d.uniform(3.0, 5.5);
  const double lead = d.uniform(2.0, 2.8);         // drift starts this long before contact
  const double drift = lead + d.uniform(0.0, 0.5);  // lateral move duration
  const double final_y = d.uniform(-0.3, 0.6);
  const double x0 = (v + u) * contact_time + 4.0;
  const double drift_start = contact_time - lead;

  WaypointScheduleScript sched;
  auto x_at = [&](double t) { return x0 - u * t; };
  sched.points.push_back({0.0, x_at(0.0), kLaneWidth});
  sched.points.push_back({drift_start, x_at(drift_start), kLaneWidth});
  sched.points.push_back({drift_start + drift, x_at(drift_start + drift), final_y});
  sched.points.push_back({kDuration + 2.0, x_at(kDuration + 2.0), final_y});
  s.actors.push_back(std::move(sched));
  return s;
}

ScenarioSpec side(Draw& d, const std::string& id) {
  const double v = d.uniform(9.0, 13.0);
  ScenarioSpec s = base_scenario(id, ScenarioCategory::Side, v);
  const double u = d.uniform(6.0, 9.0);
  const double contact_time = d.uniform(3.0, 5.5);
  const bool from_right = d.coin();
  const double sign = from_right ? 1.0 : -1.0;
  // Actor centre at contact: just entering the ego lane from its side.
  const double y_contact = -sign * d.uniform(1.2, 2.6);
  const double x_cross = v * contact_time + d.uniform(1.5, 3.5);
  AgentState crossing{{x_cross, y_contact - sign * u * contact_time}, sign * std::numbers::pi / 2.0, u, Extent{}};
  s.actors.push_back(ConstantVelocityScript{crossing});
  return s;
}

}  // namespace

std::vector<ScenarioSpec> make_default_suite(std::uint64_t seed, std::size_t per_category) {
  std::vector<ScenarioSpec> suite;
  suite.reserve(3 * per_category);
  const std::pair<ScenarioCategory, ScenarioSpec (*)(Draw&, const std::string&)> makers[] = {
      {ScenarioCategory::Stationary, &stationary},
      {ScenarioCategory::Frontal, &frontal},
      {ScenarioCategory::Side, &side},
  };
  for (const auto& [category, make] : makers) {
    Draw draw(derive_seed(seed, static_cast<std::uint64_t>(category)));
    for (std::size_t i = 0; i < per_category; ++i) {
      char id[32];
      std::snprintf(id, sizeof(id), "%s_%03zu", std::string(to_string(category)).c_str(), i);
      bool accepted = false;
      for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
        ScenarioSpec spec = make(draw, id);
        if (simulate_no_action(spec).collided) {
          suite.push_back(std::move(spec));
          accepted = true;
        }
      }
      if (!accepted) throw ScenarioInvalid(std::string("could not generate a colliding scenario for ") + id);
    }
  }
  return suite;
}

std::vector<OpenLoopSample> make_openloop_dataset(const std::vector<ScenarioSpec>& suite, std::size_t count,
                                                  std::uint64_t seed, std::size_t window_length) {
  if (suite.empty()) throw InvalidInput("make_openloop_dataset: empty suite");
  if (window_length == 0) throw InvalidInput("make_openloop_dataset: window_length must be positive");
  Draw draw(seed);
  const std::vector<double> grid = default_time_grid();

  std::vector<OpenLoopSample> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ScenarioSpec& spec = suite[(i * 7) % suite.size()];
    const double contact = simulate_no_action(spec).time;
    const double latest = std::max(spec.dt * static_cast<double>(window_length), contact - 1.0);
    const double plan_time = std::round(draw.uniform(0.5, std::max(0.6, latest)) / spec.dt) * spec.dt;

    auto scene_at = [&](double t) {
      SceneState s;
      s.time = t;
      s.ego = spec.ego_init;
      s.ego.position = spec.ego_init.position + spec.ego_init.velocity() * t;
      for (const auto& a : spec.actors) s.actors.push_back(actor_state_at(a, t));
      return s;
    };

    OpenLoopSample sample;
    sample.id = "sample_" + std::to_string(i) + "_" + spec.id;
    for (std::size_t k = window_length; k-- > 0;) {
      sample.history.frames.push_back(scene_at(plan_time - static_cast<double>(k) * spec.dt));
    }
    const SceneState& now = sample.history.frames.back();
    sample.ego_speed = now.ego.speed;
    sample.goal = spec.goal;
    sample.cruise_speed = spec.cruise_speed > 0.0 ? spec.cruise_speed : spec.ego_init.speed;
    sample.corridor = spec.corridor;

    std::vector<SceneState> future;
    for (double tau : grid) {
      SceneState f = scene_at(plan_time + tau);
      f.time = tau;
      OccupancyFrame occ;
      occ.t = tau;
      for (const auto& a : f.actors) {
        AgentState local = a;
        local.position = to_local(now.ego, a.position);
        local.heading = normalize_angle(a.heading - now.ego.heading);
        occ.actors.push_back(local);
      }
      sample.occupancy.push_back(std::move(occ));
      future.push_back(std::move(f));
    }

    SamplerConfig sampler;
    sampler.cruise_speed = sample.cruise_speed;
    sampler.corridor = sample.corridor;
    sample.gt = toy_plan(now, sample.ego_speed, sample.goal, std::span<const SceneState>(future), sampler);
    samples.push_back(std::move(sample));
  }
  return samples;
}

void to_json(nlohmann::json& j, const OpenLoopSample& s) {
  j = nlohmann::json{{"id", s.id},           {"history", s.history.frames}, {"ego_speed", s.ego_speed},
                     {"goal", s.goal},       {"cruise_speed", s.cruise_speed}, {"gt", s.gt},
                     {"occupancy", s.occupancy}};
  if (s.corridor) j["corridor"] = nlohmann::json{{"y_min", s.corridor->y_min}, {"y_max", s.corridor->y_max}};
}

void from_json(const nlohmann::json& j, OpenLoopSample& s) {
  s = OpenLoopSample{};
  j.at("id").get_to(s.id);
  s.history.frames = j.at("history").get<std::vector<SceneState>>();
  j.at("ego_speed").get_to(s.ego_speed);
  j.at("goal").get_to(s.goal);
  s.cruise_speed = j.value("cruise_speed", s.ego_speed);
  j.at("gt").get_to(s.gt);
  s.occupancy = j.value("occupancy", std::vector<OccupancyFrame>{});
  if (j.contains("corridor")) {
    s.corridor = Corridor{j.at("corridor").at("y_min").get<double>(), j.at("corridor").at("y_max").get<double>()};
  }
  if (s.history.frames.empty()) throw InvalidInput("open-loop sample " + s.id + " has no history");
  validate(s.gt, 2);
}

}  // namespace planloop
