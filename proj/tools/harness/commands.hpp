#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "planloop/closed_loop.hpp"
#include "planloop/loop.hpp"
#include "planloop/suite.hpp"

namespace planloop::harness {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kPartialFailure = 2 };

struct RunConfig {
  std::vector<std::string> scenarios{"scenarios/default"};
  /// agent_only, imagine or both.
  std::string mode = "both";
  SelectorKind selector = SelectorKind::Directional;
  double theta = 0.05;
  int max_refinements = 5;
  bool ess = true;
  bool tss = true;
  double noise_std = 0.1;
  std::uint64_t seed = 0;
  double replan_hz = 2.0;
  std::size_t jobs = 1;
  std::filesystem::path out = "out";
  bool traces = false;
  std::filesystem::path dataset = "datasets/toy_openloop.json";

  LoopConfig loop_config() const;
  std::vector<PlanningMode> modes() const;
};

/// "# key=value" lines describing the resolved configuration.
std::string config_header(const RunConfig& config, const std::string& command);

/// Expands directories to their *.json files (sorted). Throws
/// std::runtime_error naming the first path that does not exist.
std::vector<std::filesystem::path> resolve_scenario_paths(const std::vector<std::string>& entries);

using AgentFactory = std::function<std::unique_ptr<DrivingAgent>(const OpenLoopSample&)>;
using ScenarioAgentFactory = std::function<std::unique_ptr<DrivingAgent>(const ScenarioSpec&)>;

/// `agent_override` replaces the toy sampling agent (test doubles).
int cmd_closed_loop(const RunConfig& config, std::ostream& log, const ScenarioAgentFactory& agent_override = {});
int cmd_open_loop(const RunConfig& config, std::ostream& log, const AgentFactory& agent_override = {});
int cmd_ablate(const RunConfig& config, std::ostream& log, const ScenarioAgentFactory& agent_override = {});

int cmd_make_suite(const std::filesystem::path& out_dir, std::uint64_t seed, std::size_t per_category,
                   std::ostream& log);
int cmd_make_dataset(const RunConfig& config, std::size_t count, std::ostream& log);

/// Runs fn(0..count-1) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace planloop::harness
