#include "planloop/json_io.hpp"

#include <fstream>
#include <sstream>

#include "planloop/errors.hpp"

namespace planloop {

using nlohmann::json;

void to_json(json& j, const Waypoint& w) { j = json{{"t", w.t}, {"x", w.x}, {"y", w.y}}; }

void from_json(const json& j, Waypoint& w) {
  j.at("t").get_to(w.t);
  j.at("x").get_to(w.x);
  j.at("y").get_to(w.y);
}

void to_json(json& j, const Trajectory& traj) { j = traj.waypoints; }

void from_json(const json& j, Trajectory& traj) {
  if (!j.is_array()) throw InvalidInput("trajectory must be a JSON array");
  traj.waypoints = j.get<std::vector<Waypoint>>();
}

void to_json(json& j, const Vec2& v) { j = json{{"x", v.x}, {"y", v.y}}; }

void from_json(const json& j, Vec2& v) {
  j.at("x").get_to(v.x);
  j.at("y").get_to(v.y);
}

void to_json(json& j, const AgentState& a) {
  j = json{{"x", a.position.x},        {"y", a.position.y},          {"heading", a.heading},
           {"speed", a.speed},         {"length", a.extent.length},  {"width", a.extent.width}};
}

void from_json(const json& j, AgentState& a) {
  a = AgentState{};
  j.at("x").get_to(a.position.x);
  j.at("y").get_to(a.position.y);
  a.heading = normalize_angle(j.value("heading", 0.0));
  a.speed = j.value("speed", 0.0);
  a.extent.length = j.value("length", a.extent.length);
  a.extent.width = j.value("width", a.extent.width);
  if (a.speed < 0.0 || !(a.extent.length > 0.0) || !(a.extent.width > 0.0)) {
    throw InvalidInput("agent state needs non-negative speed and positive extent");
  }
}

void to_json(json& j, const SceneState& s) { j = json{{"time", s.time}, {"ego", s.ego}, {"actors", s.actors}}; }

void from_json(const json& j, SceneState& s) {
  j.at("time").get_to(s.time);
  j.at("ego").get_to(s.ego);
  s.actors = j.value("actors", std::vector<AgentState>{});
}

void to_json(json& j, const OccupancyFrame& f) { j = json{{"t", f.t}, {"actors", f.actors}}; }

void from_json(const json& j, OccupancyFrame& f) {
  j.at("t").get_to(f.t);
  f.actors = j.value("actors", std::vector<AgentState>{});
}

void to_json(json& j, const ActorScript& script) {
  if (const auto* cv = std::get_if<ConstantVelocityScript>(&script)) {
    j = cv->initial;
    j["type"] = "constant_velocity";
    return;
  }
  const auto& sched = std::get<WaypointScheduleScript>(script);
  json pts = json::array();
  for (const auto& p : sched.points) pts.push_back({{"t", p.t}, {"x", p.x}, {"y", p.y}});
  j = json{{"type", "schedule"}, {"length", sched.extent.length}, {"width", sched.extent.width}, {"waypoints", pts}};
}

void from_json(const json& j, ActorScript& script) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant_velocity") {
    script = ConstantVelocityScript{j.get<AgentState>()};
  } else if (type == "schedule") {
    WaypointScheduleScript sched;
    sched.extent.length = j.value("length", sched.extent.length);
    sched.extent.width = j.value("width", sched.extent.width);
    for (const auto& p : j.at("waypoints")) {
      sched.points.push_back({p.at("t").get<double>(), p.at("x").get<double>(), p.at("y").get<double>()});
    }
    script = std::move(sched);
  } else {
    throw InvalidInput("unknown actor type '" + type + "'");
  }
}

void to_json(json& j, const ScenarioSpec& spec) {
  j = json{{"id", spec.id},
           {"category", std::string(to_string(spec.category))},
           {"ego", spec.ego_init},
           {"goal", spec.goal},
           {"actors", spec.actors},
           {"duration", spec.duration},
           {"dt", spec.dt}};
  if (spec.reference_mode == ReferenceSpeedMode::Explicit) {
    j["reference_impact_speed"] = spec.reference_speed;
  } else {
    j["reference_impact_speed"] = "simulated_no_action";
  }
  if (spec.corridor) j["corridor"] = json{{"y_min", spec.corridor->y_min}, {"y_max", spec.corridor->y_max}};
  if (spec.cruise_speed > 0.0) j["cruise_speed"] = spec.cruise_speed;
}

void from_json(const json& j, ScenarioSpec& spec) {
  spec = ScenarioSpec{};
  j.at("id").get_to(spec.id);
  spec.category = category_from_string(j.at("category").get<std::string>());
  j.at("ego").get_to(spec.ego_init);
  j.at("goal").get_to(spec.goal);
  spec.actors = j.value("actors", std::vector<ActorScript>{});
  j.at("duration").get_to(spec.duration);
  spec.dt = j.value("dt", 0.1);
  if (j.contains("reference_impact_speed")) {
    const auto& ref = j.at("reference_impact_speed");
    if (ref.is_number()) {
      spec.reference_mode = ReferenceSpeedMode::Explicit;
      spec.reference_speed = ref.get<double>();
    } else if (ref.get<std::string>() != "simulated_no_action") {
      throw InvalidInput("reference_impact_speed must be a number or \"simulated_no_action\"");
    }
  }
  if (j.contains("corridor")) {
    spec.corridor = Corridor{j.at("corridor").at("y_min").get<double>(), j.at("corridor").at("y_max").get<double>()};
  }
  spec.cruise_speed = j.value("cruise_speed", 0.0);
}

void to_json(json& j, const LoopResult& r) {
  json buffer = json::array();
  for (const auto& e : r.buffer.entries()) buffer.push_back({{"iteration", e.iteration}, {"trajectory", e.trajectory}});
  j = json{{"selected", r.selected},
           {"selected_index", r.selected_index},
           {"buffer", buffer},
           {"refinements_used", r.refinements_used},
           {"stopped_early", r.stopped_early},
           {"stop_tcr", r.stop_tcr ? json(*r.stop_tcr) : json(nullptr)}};
}

void to_json(json& j, const LoopStat& s) {
  j = json{{"time", s.time},
           {"refinements_used", s.refinements_used},
           {"stop_tcr", s.stop_tcr ? json(*s.stop_tcr) : json(nullptr)},
           {"stopped_early", s.stopped_early},
           {"selected_index", s.selected_index}};
}

json outcome_to_json(const ClosedLoopOutcome& o, bool include_trace) {
  json j{{"scenario_id", o.scenario_id},
         {"category", std::string(to_string(o.category))},
         {"mode", std::string(to_string(o.mode))},
         {"collided", o.collided},
         {"impact_speed", o.impact_speed ? json(*o.impact_speed) : json(nullptr)},
         {"reference_speed", o.reference_speed},
         {"collision_time", o.collision_time ? json(*o.collision_time) : json(nullptr)},
         {"collision_actor", o.collision_actor ? json(*o.collision_actor) : json(nullptr)},
         {"nns", nns(o)},
         {"command_clamped", o.command_clamped},
         {"loop_stats", o.loop_stats}};
  if (include_trace) {
    json trace = json::array();
    for (const auto& s : o.ego_trace) trace.push_back({{"t", s.time}, {"ego", s.ego}});
    j["ego_trace"] = trace;
  }
  return j;
}

std::string trace_csv(const ClosedLoopOutcome& outcome) {
  std::string out = "t,x,y,heading,speed\n";
  for (const auto& s : outcome.ego_trace) {
    out += format_fixed(s.time, 3) + "," + format_fixed(s.ego.position.x) + "," + format_fixed(s.ego.position.y) +
           "," + format_fixed(s.ego.heading) + "," + format_fixed(s.ego.speed) + "\n";
  }
  return out;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    ScenarioSpec spec = j.get<ScenarioSpec>();
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace planloop
