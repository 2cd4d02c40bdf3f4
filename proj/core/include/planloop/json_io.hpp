#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "planloop/closed_loop.hpp"
#include "planloop/loop.hpp"
#include "planloop/metrics.hpp"
#include "planloop/scene.hpp"
#include "planloop/trajectory.hpp"

namespace planloop {

// Trajectory <-> [{"t": s, "x": m, "y": m}, ...]
void to_json(nlohmann::json& j, const Waypoint& w);
void from_json(const nlohmann::json& j, Waypoint& w);
void to_json(nlohmann::json& j, const Trajectory& traj);
void from_json(const nlohmann::json& j, Trajectory& traj);

void to_json(nlohmann::json& j, const Vec2& v);
void from_json(const nlohmann::json& j, Vec2& v);
// AgentState <-> {"x","y","heading","speed","length","width"}; extent keys optional on input.
void to_json(nlohmann::json& j, const AgentState& a);
void from_json(const nlohmann::json& j, AgentState& a);
void to_json(nlohmann::json& j, const SceneState& s);
void from_json(const nlohmann::json& j, SceneState& s);
void to_json(nlohmann::json& j, const OccupancyFrame& f);
void from_json(const nlohmann::json& j, OccupancyFrame& f);

void to_json(nlohmann::json& j, const ActorScript& script);
void from_json(const nlohmann::json& j, ActorScript& script);
void to_json(nlohmann::json& j, const ScenarioSpec& spec);
void from_json(const nlohmann::json& j, ScenarioSpec& spec);

void to_json(nlohmann::json& j, const LoopResult& r);
void to_json(nlohmann::json& j, const LoopStat& s);

/// Outcome document; the per-step ego trace is included only on request.
nlohmann::json outcome_to_json(const ClosedLoopOutcome& outcome, bool include_trace = false);

/// CSV with header t,x,y,heading,speed.
std::string trace_csv(const ClosedLoopOutcome& outcome);

/// Reads and validates a scenario file; InvalidInput names the path on failure.
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace planloop
