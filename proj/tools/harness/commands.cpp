#include "harness/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "planloop/errors.hpp"
#include "planloop/imaginer.hpp"
#include "planloop/json_io.hpp"
#include "planloop/metrics.hpp"
#include "planloop/planner.hpp"
#include "planloop/rng.hpp"

namespace planloop::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<double> kOpenLoopHorizons{1.0, 2.0, 3.0};

struct LoadedScenarios {
  std::vector<ScenarioSpec> scenarios;
  std::vector<std::pair<std::string, std::string>> rejects;  // (source, reason)
};

LoadedScenarios load_all(const std::vector<fs::path>& paths) {
  LoadedScenarios out;
  for (const auto& p : paths) {
    try {
      out.scenarios.push_back(load_scenario(p));
    } catch (const std::exception& e) {
      out.rejects.emplace_back(p.string(), e.what());
    }
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Scenario runs for one loop configuration; rejected scenarios are dropped
// and reported once.
struct SuiteRun {
  std::vector<ClosedLoopOutcome> outcomes;
  std::vector<std::pair<std::string, std::string>> rejects;

  double mean_refinements() const {
    double sum = 0.0;
    std::size_t ticks = 0;
    for (const auto& o : outcomes) {
      for (const auto& s : o.loop_stats) {
        sum += s.refinements_used;
        ++ticks;
      }
    }
    return ticks ? sum / static_cast<double>(ticks) : 0.0;
  }
};

SuiteRun run_suite(const std::vector<ScenarioSpec>& scenarios, PlanningMode mode, const LoopConfig& loop,
                   const RunConfig& config, const ScenarioAgentFactory& agent_override) {
  ClosedLoopOptions options;
  options.agent_factory = agent_override;
  options.replan_hz = config.replan_hz;
  options.noise_std = config.noise_std;
  options.seed = config.seed;

  std::vector<std::optional<ClosedLoopOutcome>> results(scenarios.size());
  std::vector<std::string> errors(scenarios.size());
  parallel_for(scenarios.size(), config.jobs, [&](std::size_t i) {
    try {
      results[i] = run_closed_loop(scenarios[i], mode, loop, options);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  SuiteRun run;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (results[i]) {
      run.outcomes.push_back(std::move(*results[i]));
    } else {
      run.rejects.emplace_back(scenarios[i].id, errors[i]);
    }
  }
  return run;
}

json rejects_json(const std::vector<std::pair<std::string, std::string>>& rejects) {
  json arr = json::array();
  for (const auto& [source, reason] : rejects) arr.push_back({{"source", source}, {"reason", reason}});
  return arr;
}

std::optional<std::vector<ScenarioSpec>> prepare_scenarios(const RunConfig& config, std::ostream& log,
                                                           std::vector<std::pair<std::string, std::string>>& rejects) {
  std::vector<fs::path> paths;
  try {
    paths = resolve_scenario_paths(config.scenarios);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return std::nullopt;
  }
  if (paths.empty()) {
    log << "error: no scenarios\n";
    return std::nullopt;
  }
  LoadedScenarios loaded = load_all(paths);
  rejects = std::move(loaded.rejects);
  if (loaded.scenarios.empty()) {
    log << "error: no scenarios could be loaded\n";
    for (const auto& [src, why] : rejects) log << "  rejected " << src << ": " << why << '\n';
    return std::nullopt;
  }
  return std::move(loaded.scenarios);
}

bool validate_config(const RunConfig& config, std::ostream& log) {
  try {
    config.loop_config().validate();
    (void)config.modes();
    if (!(config.replan_hz > 0.0)) throw ConfigError("replan rate must be positive");
    if (config.noise_std < 0.0) throw ConfigError("noise std must be non-negative");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return false;
  }
  return true;
}

}  // namespace

LoopConfig RunConfig::loop_config() const {
  LoopConfig c;
  c.theta = theta;
  c.max_refinements = max_refinements;
  c.selector = selector;
  c.ess_enabled = ess;
  c.tss_enabled = tss;
  return c;
}

std::vector<PlanningMode> RunConfig::modes() const {
  if (mode == "both") return {PlanningMode::AgentOnly, PlanningMode::Imagine};
  try {
    return {mode_from_string(mode)};
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

std::string config_header(const RunConfig& config, const std::string& command) {
  std::string h;
  h += fmt::format("# command={}\n", command);
  h += fmt::format("# mode={}\n", config.mode);
  h += fmt::format("# selector={}\n", to_string(config.selector));
  h += fmt::format("# theta={}\n", format_fixed(config.theta, 4));
  h += fmt::format("# max_refinements={}\n", config.max_refinements);
  h += fmt::format("# ess={} tss={}\n", config.ess ? "on" : "off", config.tss ? "on" : "off");
  h += fmt::format("# noise_std={}\n", format_fixed(config.noise_std, 4));
  h += fmt::format("# replan_hz={}\n", format_fixed(config.replan_hz, 2));
  h += fmt::format("# seed={}\n", config.seed);
  return h;
}

std::vector<fs::path> resolve_scenario_paths(const std::vector<std::string>& entries) {
  std::vector<fs::path> out;
  for (const auto& entry : entries) {
    const fs::path p(entry);
    if (!fs::exists(p)) throw std::runtime_error("missing scenario file: " + p.string());
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

int cmd_closed_loop(const RunConfig& config, std::ostream& log, const ScenarioAgentFactory& agent_override) {
  if (!validate_config(config, log)) return kConfigError;
  std::vector<std::pair<std::string, std::string>> rejects;
  auto scenarios = prepare_scenarios(config, log, rejects);
  if (!scenarios) return kConfigError;

  std::string csv = config_header(config, "closed-loop");
  csv += "mode," + suite_csv_header() + "\n";
  json summary{{"command", "closed-loop"}, {"seed", config.seed}, {"modes", json::array()}};

  std::map<std::string, bool> rejected_ids;
  for (PlanningMode mode : config.modes()) {
    SuiteRun run = run_suite(*scenarios, mode, config.loop_config(), config, agent_override);
    const std::string mode_name(to_string(mode));
    for (const auto& o : run.outcomes) {
      write_json_file(config.out / mode_name / (o.scenario_id + ".json"), outcome_to_json(o));
      if (config.traces) write_text(config.out / mode_name / (o.scenario_id + "_trace.csv"), trace_csv(o));
    }
    for (const auto& r : run.rejects) {
      if (!rejected_ids[r.first]) rejects.push_back(r);
      rejected_ids[r.first] = true;
    }
    if (run.outcomes.empty()) continue;

    const SuiteSummary s = aggregate_suite(run.outcomes);
    for (const auto& row : s.rows) csv += mode_name + "," + suite_csv_row(row) + "\n";
    summary["modes"].push_back(
        {{"mode", mode_name}, {"rows", suite_json(s)}, {"mean_refinements", run.mean_refinements()}});
    log << fmt::format("{:<10} scenarios={} collision_rate={}% mean_nns={}\n", mode_name, s.rows[0].scenarios,
                       format_fixed(s.rows[0].collision_rate_pct, 2), format_fixed(s.rows[0].mean_nns, 3));
  }
  summary["rejects"] = rejects_json(rejects);

  write_text(config.out / "summary.csv", csv);
  write_json_file(config.out / "summary.json", summary);
  for (const auto& [src, why] : rejects) log << "rejected " << src << ": " << why << '\n';
  return rejects.empty() ? kSuccess : kPartialFailure;
}

int cmd_open_loop(const RunConfig& config, std::ostream& log, const AgentFactory& agent_override) {
  if (!validate_config(config, log)) return kConfigError;
  json doc;
  try {
    doc = read_json_file(config.dataset);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  }
  const json& items = doc.is_object() && doc.contains("samples") ? doc.at("samples") : doc;
  if (!items.is_array()) {
    log << "error: dataset must be an array of samples\n";
    return kConfigError;
  }

  std::vector<OpenLoopSample> samples;
  std::size_t skipped = 0;
  for (const auto& item : items) {
    try {
      OpenLoopSample s = item.get<OpenLoopSample>();
      if (s.gt.size() == 0 || s.gt.back().t + 1e-9 < kOpenLoopHorizons.back()) {
        throw InvalidInput("ground truth does not cover the 3 s horizon");
      }
      samples.push_back(std::move(s));
    } catch (const std::exception& e) {
      ++skipped;
    }
  }
  if (samples.empty()) {
    log << "error: no valid open-loop samples (" << skipped << " skipped)\n";
    return kConfigError;
  }

  std::string csv = config_header(config, "open-loop");
  csv += fmt::format("# samples={} skipped={}\n", samples.size(), skipped);
  csv += "mode,horizon,l2_m,collision_rate_pct\n";
  json report{{"command", "open-loop"}, {"samples", samples.size()}, {"skipped", skipped}, {"modes", json::array()}};

  for (PlanningMode mode : config.modes()) {
    LoopConfig loop = config.loop_config();
    loop.agent_only = mode == PlanningMode::AgentOnly;

    std::vector<Trajectory> preds(samples.size());
    std::vector<std::string> errors(samples.size());
    parallel_for(samples.size(), config.jobs, [&](std::size_t i) {
      const OpenLoopSample& s = samples[i];
      try {
        std::unique_ptr<DrivingAgent> agent;
        if (agent_override) {
          agent = agent_override(s);
        } else {
          SamplerConfig sampler;
          sampler.cruise_speed = s.cruise_speed > 0.0 ? s.cruise_speed : s.ego_speed;
          sampler.corridor = s.corridor;
          agent = std::make_unique<ToyAgent>(s.goal, sampler);
        }
        ToyImaginer imaginer(config.noise_std, derive_seed(config.seed, hash_string(s.id)));
        LoopConfig local = loop;
        local.window_length = s.history.frames.size();
        preds[i] = run_loop(*agent, imaginer, s.history, s.ego_speed, local).selected;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });

    std::vector<double> l2_sum(kOpenLoopHorizons.size(), 0.0);
    std::vector<CollisionSample> collision_samples;
    std::size_t scored = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!errors[i].empty()) {
        log << "sample " << samples[i].id << " failed: " << errors[i] << '\n';
        continue;
      }
      const auto l2 = open_loop_l2(preds[i], samples[i].gt, kOpenLoopHorizons);
      for (std::size_t h = 0; h < l2.size(); ++h) l2_sum[h] += l2[h];
      collision_samples.push_back({preds[i], samples[i].occupancy, samples[i].history.current().ego.extent});
      ++scored;
    }
    if (scored == 0) continue;
    const auto rates = open_loop_collision_rate(collision_samples, kOpenLoopHorizons);

    const std::string mode_name(to_string(mode));
    json rows = json::array();
    double l2_avg = 0.0;
    double rate_avg = 0.0;
    for (std::size_t h = 0; h < kOpenLoopHorizons.size(); ++h) {
      const double l2 = l2_sum[h] / static_cast<double>(scored);
      l2_avg += l2;
      rate_avg += rates[h];
      csv += fmt::format("{},{}s,{},{}\n", mode_name, format_fixed(kOpenLoopHorizons[h], 0), format_fixed(l2),
                         format_fixed(rates[h]));
      rows.push_back({{"horizon", kOpenLoopHorizons[h]}, {"l2_m", l2}, {"collision_rate_pct", rates[h]}});
    }
    l2_avg /= static_cast<double>(kOpenLoopHorizons.size());
    rate_avg /= static_cast<double>(kOpenLoopHorizons.size());
    csv += fmt::format("{},Avg.,{},{}\n", mode_name, format_fixed(l2_avg), format_fixed(rate_avg));
    report["modes"].push_back({{"mode", mode_name},
                               {"scored", scored},
                               {"rows", rows},
                               {"l2_avg", l2_avg},
                               {"collision_rate_avg", rate_avg}});
    log << fmt::format("{:<10} L2 avg={} m, collision avg={}%\n", mode_name, format_fixed(l2_avg, 3),
                       format_fixed(rate_avg, 2));
  }

  write_text(config.out / "openloop.csv", csv);
  write_json_file(config.out / "openloop.json", report);
  return skipped == 0 ? kSuccess : kPartialFailure;
}

int cmd_ablate(const RunConfig& config, std::ostream& log, const ScenarioAgentFactory& agent_override) {
  if (!validate_config(config, log)) return kConfigError;
  std::vector<std::pair<std::string, std::string>> rejects;
  auto scenarios = prepare_scenarios(config, log, rejects);
  if (!scenarios) return kConfigError;

  struct Row {
    std::string table;
    bool ess;
    bool tss;
    SelectorKind selector;
  };
  const std::vector<Row> rows{
      {"ess_tss", false, false, SelectorKind::Last},        {"ess_tss", true, false, SelectorKind::Last},
      {"ess_tss", false, true, config.selector},            {"ess_tss", true, true, config.selector},
      {"selector", true, true, SelectorKind::Directional},  {"selector", true, true, SelectorKind::SmoothSel},
      {"selector", true, true, SelectorKind::SoftMin},      {"selector", true, true, SelectorKind::MaxCons},
  };

  RunConfig header_config = config;
  header_config.mode = "imagine";
  std::string csv = config_header(header_config, "ablate");
  csv += "table,ess,tss,selector,scenarios,collision_rate_pct,mean_nns,mean_refinements\n";
  json report{{"command", "ablate"}, {"seed", config.seed}, {"rows", json::array()}};

  std::map<std::tuple<bool, bool, SelectorKind>, std::pair<SuiteRow, double>> cache;
  std::map<std::string, bool> rejected_ids;
  for (const auto& row : rows) {
    const auto key = std::make_tuple(row.ess, row.tss, row.selector);
    if (!cache.contains(key)) {
      LoopConfig loop = config.loop_config();
      loop.ess_enabled = row.ess;
      loop.tss_enabled = row.tss;
      loop.selector = row.selector;
      SuiteRun run = run_suite(*scenarios, PlanningMode::Imagine, loop, config, agent_override);
      for (const auto& r : run.rejects) {
        if (!rejected_ids[r.first]) rejects.push_back(r);
        rejected_ids[r.first] = true;
      }
      if (run.outcomes.empty()) {
        log << "error: every scenario was rejected\n";
        for (const auto& [src, why] : rejects) log << "  rejected " << src << ": " << why << '\n';
        return kConfigError;
      }
      cache[key] = {aggregate_suite(run.outcomes).rows.front(), run.mean_refinements()};
    }
    const auto& [avg, refinements] = cache[key];
    const std::string selector = row.tss ? std::string(to_string(row.selector)) : "none";
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", row.table, row.ess ? "on" : "off", row.tss ? "on" : "off",
                       selector, avg.scenarios, format_fixed(avg.collision_rate_pct), format_fixed(avg.mean_nns),
                       format_fixed(refinements));
    report["rows"].push_back({{"table", row.table},
                              {"ess", row.ess},
                              {"tss", row.tss},
                              {"selector", selector},
                              {"scenarios", avg.scenarios},
                              {"collision_rate_pct", avg.collision_rate_pct},
                              {"mean_nns", avg.mean_nns},
                              {"mean_refinements", refinements}});
    log << fmt::format("{:<8} ess={:<3} tss={:<3} {:<11} collision={}% refinements={}\n", row.table,
                       row.ess ? "on" : "off", row.tss ? "on" : "off", selector,
                       format_fixed(avg.collision_rate_pct, 2), format_fixed(refinements, 2));
  }
  report["rejects"] = rejects_json(rejects);

  write_text(config.out / "ablation.csv", csv);
  write_json_file(config.out / "ablation.json", report);
  for (const auto& [src, why] : rejects) log << "rejected " << src << ": " << why << '\n';
  return rejects.empty() ? kSuccess : kPartialFailure;
}

int cmd_make_suite(const fs::path& out_dir, std::uint64_t seed, std::size_t per_category, std::ostream& log) {
  try {
    const auto suite = make_default_suite(seed, per_category);
    for (const auto& s : suite) write_json_file(out_dir / (s.id + ".json"), json(s));
    log << "wrote " << suite.size() << " scenarios to " << out_dir.string() << '\n';
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kSuccess;
}

int cmd_make_dataset(const RunConfig& config, std::size_t count, std::ostream& log) {
  std::vector<std::pair<std::string, std::string>> rejects;
  auto scenarios = prepare_scenarios(config, log, rejects);
  if (!scenarios) return kConfigError;
  try {
    const auto samples = make_openloop_dataset(*scenarios, count, config.seed);
    write_json_file(config.dataset, json{{"samples", samples}});
    log << "wrote " << samples.size() << " samples to " << config.dataset.string() << '\n';
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kSuccess;
}

}  // namespace planloop::harness
