#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "planloop/errors.hpp"
#include "planloop/json_io.hpp"
#include "planloop/loop.hpp"
#include "support/doubles.hpp"
#include "support/oracles.hpp"

namespace planloop {
namespace {

using testing::HalvingAgent;
using testing::line;
using testing::ReplayImaginer;
using testing::scaled;
using testing::ScriptedAgent;
using testing::still_history;

oracle::Path to_path(const Trajectory& t) {
  oracle::Path p;
  for (const auto& w : t.waypoints) {
    p.t.push_back(w.t);
    p.p.emplace_back(w.x, w.y);
  }
  return p;
}

TEST(ShouldStop, RepeatedEntryStops) {
  TrajectoryBuffer b;
  b.push(line(1, 0));
  b.push(line(1, 0));
  const auto s = should_stop(b, 1e-12);
  EXPECT_TRUE(s.stop);
  EXPECT_EQ(s.min_tcr, 0.0);
}

TEST(ShouldStop, DoubledEntryDoesNot) {
  TrajectoryBuffer b;
  b.push(line(2, 1));
  b.push(scaled(line(2, 1), 2.0));
  const auto s = should_stop(b, 0.05);
  EXPECT_FALSE(s.stop);
  EXPECT_NEAR(s.min_tcr, 1.0, 1e-6);
}

TEST(ShouldStop, MinimumOverEarlierEntries) {
  const auto y0 = line(1.0, 0.0);
  const auto y1 = line(1.0, 0.3);
  const auto y2 = line(1.02, 0.01);
  TrajectoryBuffer b;
  b.push(y0);
  b.push(y1);
  b.push(y2);
  const double t0 = oracle::tcr(to_path(y2), to_path(y0), 1e-6);
  const double t1 = oracle::tcr(to_path(y2), to_path(y1), 1e-6);
  const auto s = should_stop(b, 0.05);
  EXPECT_NEAR(s.min_tcr, std::min(t0, t1), 1e-12);
  EXPECT_LT(t0, t1);
  EXPECT_TRUE(s.stop);
}

TEST(ShouldStop, NeedsTwoEntries) {
  TrajectoryBuffer b;
  EXPECT_THROW(should_stop(b, 0.05), InvalidInput);
  b.push(line(1, 0));
  EXPECT_THROW(should_stop(b, 0.05), InvalidInput);
}

TEST(Buffer, IterationsAreContiguous) {
  TrajectoryBuffer b;
  for (int i = 0; i < 4; ++i) b.push(line(1, i));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(b.entries()[i].iteration, i);
  EXPECT_EQ(b.latest(), line(1, 3));
}

ImaginedSequence ten_hz(std::size_t frames = 25) {
  ImaginedSequence s;
  for (std::size_t k = 0; k < frames; ++k) {
    SceneState f;
    f.time = static_cast<double>(k + 1) / 10.0;
    f.ego.position = {static_cast<double>(k), 0.0};
    s.frames.push_back(f);
  }
  return s;
}

TEST(Keyframes, HalfAndOneSecondOnTenHertz) {
  const auto seq = ten_hz();
  const std::vector<double> offsets{0.5, 1.0};
  const auto k = extract_keyframes(seq, offsets);
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(k[0], seq.frames[4]);
  EXPECT_EQ(k[1], seq.frames[9]);
}

TEST(Keyframes, EmptyOffsets) {
  EXPECT_TRUE(extract_keyframes(ten_hz(), std::vector<double>{}).empty());
}

TEST(Keyframes, NearestTimestamp) {
  const auto seq = ten_hz();
  const std::vector<double> offsets{0.47};
  EXPECT_DOUBLE_EQ(extract_keyframes(seq, offsets)[0].time, 0.5);
}

TEST(Keyframes, TiesGoToEarlierFrame) {
  const auto seq = ten_hz();
  const std::vector<double> offsets{0.45};
  EXPECT_DOUBLE_EQ(extract_keyframes(seq, offsets)[0].time, 0.4);
}

TEST(Keyframes, OffsetPastHorizonIsConfigError) {
  const std::vector<double> offsets{2.6};
  EXPECT_THROW(extract_keyframes(ten_hz(), offsets), ConfigError);
}

TEST(RunLoop, ConstantAgentStopsAfterOneRefinement) {
  for (int max_ref : {1, 2, 5, 9}) {
    ScriptedAgent agent({line(1, 0.2)});
    ReplayImaginer imaginer;
    LoopConfig cfg;
    cfg.max_refinements = max_ref;
    const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
    EXPECT_EQ(r.refinements_used, 1);
    EXPECT_EQ(r.buffer.size(), 2u);
    EXPECT_TRUE(r.stopped_early);
    ASSERT_TRUE(r.stop_tcr);
    EXPECT_EQ(*r.stop_tcr, 0.0);
    EXPECT_EQ(agent.calls, 2u);
    EXPECT_EQ(imaginer.calls, 1u);
  }
}

TEST(RunLoop, EssOffRunsEveryRefinement) {
  ScriptedAgent agent({line(1, 0)});
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.ess_enabled = false;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(r.refinements_used, 5);
  EXPECT_EQ(r.buffer.size(), 6u);
  EXPECT_FALSE(r.stopped_early);
  EXPECT_EQ(agent.calls, 6u);
  EXPECT_EQ(imaginer.calls, 5u);
}

TEST(RunLoop, CallCountsTrackRefinements) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Trajectory> outs;
    for (int i = 0; i < 7; ++i) outs.push_back(line(u(rng), u(rng) - 1.25));
    ScriptedAgent agent(outs);
    ReplayImaginer imaginer;
    LoopConfig cfg;
    cfg.theta = 0.2;
    const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
    EXPECT_EQ(agent.calls, static_cast<std::size_t>(r.refinements_used) + 1);
    EXPECT_EQ(imaginer.calls, static_cast<std::size_t>(r.refinements_used));
    EXPECT_EQ(r.buffer.size(), static_cast<std::size_t>(r.refinements_used) + 1);
    EXPECT_LE(r.refinements_used, cfg.max_refinements);
    if (r.stopped_early) {
      EXPECT_LT(*r.stop_tcr, cfg.theta);
    } else {
      EXPECT_EQ(r.refinements_used, cfg.max_refinements);
    }
  }
}

TEST(RunLoop, ProtocolOrdering) {
  const std::vector outs{line(1, 0), line(1, 0.5), line(1, 1.0), line(1, 1.5)};
  ScriptedAgent agent(outs);
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.max_refinements = 3;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  // First plan has no keyframes; each refinement receives two.
  EXPECT_EQ(agent.keyframe_counts, (std::vector<std::size_t>{0, 2, 2, 2}));
  // Each imagination is conditioned on the previous plan.
  ASSERT_EQ(imaginer.conditionings.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(imaginer.conditionings[i], outs[i]);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r.buffer.entries()[i].trajectory, outs[i]);
}

TEST(RunLoop, HalvingPerturbationStopsWhereReplaySays) {
  const auto base = line(5.0, 0.0);
  const auto pert = line(1.0, 1.0);
  LoopConfig cfg;

  // Replay the double standalone.
  std::vector<oracle::Path> seen{to_path(HalvingAgent::output(base, pert, 0))};
  int expected = cfg.max_refinements;
  for (int i = 1; i <= cfg.max_refinements; ++i) {
    const auto cur = to_path(HalvingAgent::output(base, pert, i));
    double m = 1e300;
    for (const auto& p : seen) m = std::min(m, oracle::tcr(cur, p, 1e-6));
    seen.push_back(cur);
    if (m < cfg.theta) {
      expected = i;
      break;
    }
  }
  ASSERT_GT(expected, 1);
  ASSERT_LT(expected, cfg.max_refinements);

  HalvingAgent agent(base, pert);
  ReplayImaginer imaginer;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(r.refinements_used, expected);
  EXPECT_TRUE(r.stopped_early);
}

TEST(RunLoop, TssOffSelectsLatest) {
  const std::vector outs{line(1, 0), line(0, 1), line(1, 1)};
  ScriptedAgent agent(outs);
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.max_refinements = 2;
  cfg.ess_enabled = false;
  cfg.tss_enabled = false;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(r.selected_index, 2u);
  EXPECT_EQ(r.selected, outs[2]);
}

TEST(RunLoop, TssSelectsOverWholeBuffer) {
  // Directions +x, +y and the diagonal: the diagonal is the aligned one.
  const std::vector outs{line(1, 1), line(1, 0), line(0, 1)};
  ScriptedAgent agent(outs);
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.max_refinements = 2;
  cfg.ess_enabled = false;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(r.selected_index, 0u);
  EXPECT_EQ(r.selected, outs[0]);
}

TEST(RunLoop, SelectorTiesPreferNewestEntry) {
  // Braking and cruising share the same heading; the later one wins the tie.
  const std::vector outs{line(1, 0), line(0.5, 0)};
  ScriptedAgent agent(outs);
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.max_refinements = 1;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(r.selected_index, 1u);
}

TEST(RunLoop, DegenerateDirectionsFallBackToNewestEntry) {
  // Opposite headings cancel, so directional selection has no mean to compare against.
  const std::vector outs{line(1, 0), line(-1, 0)};
  ScriptedAgent agent(outs);
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.max_refinements = 1;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(r.selected_index, 1u);
  EXPECT_EQ(r.selected, outs[1]);
}

TEST(RunLoop, MaxConsWithoutEgoMotionPicksNewestEntry) {
  const std::vector outs{line(1, 0), line(0, 1), line(1, 1)};
  ScriptedAgent agent(outs);
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.max_refinements = 2;
  cfg.ess_enabled = false;
  cfg.selector = SelectorKind::MaxCons;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(r.selected_index, 2u);
}

TEST(RunLoop, AgentOnlyPlansOnce) {
  ScriptedAgent agent({line(1, 0), line(2, 0)});
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.agent_only = true;
  const auto r = run_loop(agent, imaginer, still_history(), 10.0, cfg);
  EXPECT_EQ(agent.calls, 1u);
  EXPECT_EQ(imaginer.calls, 0u);
  EXPECT_EQ(r.refinements_used, 0);
  EXPECT_EQ(r.buffer.size(), 1u);
  EXPECT_FALSE(r.stop_tcr);
}

TEST(RunLoop, FailuresCarryIteration) {
  {
    ScriptedAgent agent({line(1, 0), line(2, 0), line(3, 0)});
    agent.fail_on_call = 2;
    ReplayImaginer imaginer;
    LoopConfig cfg;
    cfg.ess_enabled = false;
    try {
      run_loop(agent, imaginer, still_history(), 10.0, cfg);
      FAIL() << "expected LoopError";
    } catch (const LoopError& e) {
      EXPECT_EQ(e.iteration(), 2);
    }
  }
  {
    ScriptedAgent agent({line(1, 0), line(2, 0), line(3, 0)});
    ReplayImaginer imaginer;
    imaginer.fail_on_call = 3;
    LoopConfig cfg;
    cfg.ess_enabled = false;
    try {
      run_loop(agent, imaginer, still_history(), 10.0, cfg);
      FAIL() << "expected LoopError";
    } catch (const LoopError& e) {
      EXPECT_EQ(e.iteration(), 3);
      EXPECT_NE(std::string(e.what()).find("imaginer"), std::string::npos);
    }
  }
}

TEST(RunLoop, ShortImaginedHorizonIsConfigError) {
  ScriptedAgent agent({line(1, 0), line(2, 0)});
  ReplayImaginer imaginer(5);  // 0.5 s of frames
  LoopConfig cfg;
  EXPECT_THROW(run_loop(agent, imaginer, still_history(), 10.0, cfg), ConfigError);
}

TEST(RunLoop, InvalidConfigAndHistory) {
  ScriptedAgent agent({line(1, 0)});
  ReplayImaginer imaginer;
  LoopConfig cfg;
  cfg.theta = 0.0;
  EXPECT_THROW(run_loop(agent, imaginer, still_history(), 10.0, cfg), ConfigError);
  cfg = LoopConfig{};
  cfg.max_refinements = 0;
  EXPECT_THROW(run_loop(agent, imaginer, still_history(), 10.0, cfg), ConfigError);
  cfg = LoopConfig{};
  EXPECT_THROW(run_loop(agent, imaginer, still_history(3), 10.0, cfg), InvalidInput);
  EXPECT_THROW(run_loop(agent, imaginer, ObservationHistory{}, 10.0, cfg), InvalidInput);
}

TEST(RunLoop, DeterministicAcrossRuns) {
  auto once = [] {
    HalvingAgent agent(line(4.0, 0.5), line(-1.0, 2.0));
    ReplayImaginer imaginer;
    LoopConfig cfg;
    cfg.selector = SelectorKind::SoftMin;
    return run_loop(agent, imaginer, still_history(), 8.0, cfg);
  };
  const auto a = once();
  const auto b = once();
  EXPECT_EQ(a, b);
  EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
}

}  // namespace
}  // namespace planloop
