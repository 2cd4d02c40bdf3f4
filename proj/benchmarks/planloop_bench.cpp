#include <benchmark/benchmark.h>

#include <random>

#include "planloop/closed_loop.hpp"
#include "planloop/imaginer.hpp"
#include "planloop/planner.hpp"
#include "planloop/selection.hpp"
#include "planloop/suite.hpp"

namespace {

using namespace planloop;

Trajectory random_trajectory(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  Trajectory t;
  for (int k = 1; k <= 6; ++k) t.waypoints.push_back({0.5 * k, u(rng), u(rng)});
  return t;
}

void BM_Tcr(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = random_trajectory(rng);
  const auto b = random_trajectory(rng);
  for (auto _ : state) benchmark::DoNotOptimize(tcr(a, b));
}
BENCHMARK(BM_Tcr);

void BM_SelectDirectional(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<Trajectory> c;
  for (int i = 0; i < state.range(0); ++i) c.push_back(random_trajectory(rng));
  for (auto _ : state) benchmark::DoNotOptimize(select_directional(c).index);
}
BENCHMARK(BM_SelectDirectional)->Arg(2)->Arg(6)->Arg(32);

SceneState busy_scene(int actors) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(0.0, 40.0), y(-6.0, 6.0);
  SceneState s;
  s.ego.speed = 10.0;
  for (int i = 0; i < actors; ++i) {
    AgentState a;
    a.position = {x(rng), y(rng)};
    s.actors.push_back(a);
  }
  return s;
}

void BM_ToyPlan(benchmark::State& state) {
  const auto scene = busy_scene(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(toy_plan(scene, 10.0, {400.0, 0.0}, std::nullopt));
}
BENCHMARK(BM_ToyPlan)->Arg(0)->Arg(3)->Arg(10);

void BM_RunLoop(benchmark::State& state) {
  ObservationHistory history;
  for (int i = 3; i >= 0; --i) {
    SceneState s = busy_scene(3);
    s.time = -0.1 * i;
    history.frames.push_back(s);
  }
  ToyAgent agent({400.0, 0.0}, {});
  LoopConfig cfg;
  cfg.ess_enabled = state.range(0) != 0;
  for (auto _ : state) {
    ToyImaginer imaginer(0.1, 7);
    benchmark::DoNotOptimize(run_loop(agent, imaginer, history, 10.0, cfg).refinements_used);
  }
}
BENCHMARK(BM_RunLoop)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_ClosedLoopScenario(benchmark::State& state) {
  const auto suite = make_default_suite(kDefaultSuiteSeed, 1);
  const auto& scenario = suite[static_cast<std::size_t>(state.range(0))];
  const auto mode = state.range(1) ? PlanningMode::Imagine : PlanningMode::AgentOnly;
  ClosedLoopOptions opts;
  opts.noise_std = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(run_closed_loop(scenario, mode, {}, opts).collided);
}
BENCHMARK(BM_ClosedLoopScenario)->ArgsProduct({{0, 1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
