#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "planloop/direction.hpp"
#include "planloop/errors.hpp"
#include "planloop/trajectory.hpp"
#include "support/doubles.hpp"
#include "support/oracles.hpp"

namespace planloop {
namespace {

using testing::line;
using testing::scaled;

Trajectory random_trajectory(std::mt19937_64& rng, std::size_t n = 6) {
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  Trajectory t;
  for (std::size_t i = 1; i <= n; ++i) t.waypoints.push_back({0.5 * i, coord(rng), coord(rng)});
  return t;
}

oracle::Path to_path(const Trajectory& t) {
  oracle::Path p;
  for (const auto& w : t.waypoints) {
    p.t.push_back(w.t);
    p.p.emplace_back(w.x, w.y);
  }
  return p;
}

Trajectory pts(std::initializer_list<std::pair<double, double>> xy) {
  Trajectory t;
  double time = 0.5;
  for (auto [x, y] : xy) {
    t.waypoints.push_back({time, x, y});
    time += 0.5;
  }
  return t;
}

TEST(DefaultGrid, SixQueriesAtHalfSecond) {
  const auto g = default_time_grid();
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.front(), 0.5);
  EXPECT_DOUBLE_EQ(g.back(), 3.0);
}

TEST(Validate, RejectsShortNonFiniteAndUnorderedTrajectories) {
  EXPECT_THROW(validate(pts({{1, 0}})), InvalidInput);
  Trajectory nan_traj = line(1, 0);
  nan_traj[2].x = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate(nan_traj), InvalidInput);
  Trajectory unordered = line(1, 0);
  std::swap(unordered[1].t, unordered[2].t);
  EXPECT_THROW(validate(unordered), InvalidInput);
  Trajectory zero_time = line(1, 0);
  zero_time[0].t = 0.0;
  EXPECT_THROW(validate(zero_time), InvalidInput);
  EXPECT_NO_THROW(validate(line(1, 0)));
}

TEST(Tcr, IdenticalTrajectoriesGiveZero) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_trajectory(rng);
    EXPECT_EQ(tcr(a, a), 0.0);
  }
}

TEST(Tcr, TwoPointExample) {
  const auto a = pts({{1, 0}, {2, 0}});
  const auto b = pts({{1, 0}, {1, 0}});
  EXPECT_NEAR(tcr(a, b, 1e-6), 0.5 / (1.0 + 1e-6), 1e-12);
  EXPECT_NEAR(tcr(a, b, 1e-6), 0.4999995, 1e-9);
}

TEST(Tcr, DoubledTrajectoryIsNearOne) {
  const auto b = line(3.0, 1.0);
  EXPECT_NEAR(tcr(scaled(b, 2.0), b), 1.0, 1e-6);
}

TEST(Tcr, IsAsymmetric) {
  const auto b = line(1.0, 0.0);
  const auto a = scaled(b, 2.0);
  EXPECT_NEAR(tcr(a, b), 1.0, 1e-6);
  EXPECT_NEAR(tcr(b, a), 0.5, 1e-6);
}

TEST(Tcr, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_trajectory(rng);
    const auto b = random_trajectory(rng);
    const double got = tcr(a, b);
    EXPECT_GE(got, 0.0);
    EXPECT_NEAR(got, oracle::tcr(to_path(a), to_path(b), 1e-6), 1e-9);
  }
}

TEST(Tcr, RejectsMismatchedInputs) {
  EXPECT_THROW(tcr(line(1, 0, 6), line(1, 0, 5)), InvalidInput);
  Trajectory shifted = line(1, 0);
  shifted[3].t += 0.1;
  EXPECT_THROW(tcr(shifted, line(1, 0)), InvalidInput);
  Trajectory inf = line(1, 0);
  inf[0].y = std::numeric_limits<double>::infinity();
  EXPECT_THROW(tcr(inf, line(1, 0)), InvalidInput);
}

TEST(SmoothL1, HandExamples) {
  Trajectory pred{{{0.5, 1.0, 0.0}}};
  Trajectory gt{{{0.5, 0.0, 0.0}}};
  EXPECT_DOUBLE_EQ(smooth_l1(pred, gt, 1.0), 0.25);
  pred[0].x = 3.0;
  EXPECT_DOUBLE_EQ(smooth_l1(pred, gt, 1.0), 1.25);
  EXPECT_EQ(smooth_l1(gt, gt), 0.0);
}

TEST(SmoothL1, BranchesMeetAtBeta) {
  for (double beta : {0.1, 1.0, 2.5}) {
    Trajectory gt{{{0.5, 0.0, 0.0}}};
    Trajectory below{{{0.5, std::nextafter(beta, 0.0), 0.0}}};
    Trajectory at{{{0.5, beta, 0.0}}};
    EXPECT_NEAR(2.0 * smooth_l1(at, gt, beta), 0.5 * beta, 1e-12);
    EXPECT_NEAR(2.0 * smooth_l1(below, gt, beta), 0.5 * beta, 1e-12);
  }
}

TEST(SmoothL1, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> beta(0.1, 3.0);
  for (int i = 0; i < 30; ++i) {
    const auto a = random_trajectory(rng);
    const auto b = random_trajectory(rng);
    const double bt = beta(rng);
    EXPECT_NEAR(smooth_l1(a, b, bt), oracle::smooth_l1(to_path(a), to_path(b), bt), 1e-9);
  }
}

TEST(SmoothL1, RejectsMismatchAndBadBeta) {
  EXPECT_THROW(smooth_l1(line(1, 0, 6), line(1, 0, 4)), InvalidInput);
  EXPECT_THROW(smooth_l1(line(1, 0), line(1, 0), 0.0), InvalidInput);
}

TEST(AvgDirection, StraightLine) {
  const auto d = avg_direction(pts({{0, 0}, {1, 0}, {2, 0}}));
  EXPECT_FALSE(d.degenerate);
  EXPECT_NEAR(d.dx, 1.0, 1e-12);
  EXPECT_NEAR(d.dy, 0.0, 1e-12);
}

TEST(AvgDirection, RightAngle) {
  const auto d = avg_direction(pts({{0, 0}, {1, 0}, {1, 1}}));
  EXPECT_NEAR(d.dx, std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(d.dy, std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(d.norm(), 1.0, 1e-9);
}

TEST(AvgDirection, ZeroDisplacementsAreDegenerate) {
  const auto d = avg_direction(pts({{3, 3}, {3, 3}, {3, 3}}));
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.dx, 0.0);
  EXPECT_EQ(d.dy, 0.0);
}

TEST(AvgDirection, CancellingDisplacementsAreDegenerate) {
  const auto d = avg_direction(pts({{0, 0}, {1, 0}, {0, 0}}));
  EXPECT_TRUE(d.degenerate);
}

TEST(AvgDirection, RejectsSingleWaypoint) {
  EXPECT_THROW(avg_direction(pts({{1, 0}})), InvalidInput);
}

TEST(AvgDirection, UnitAndMatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto t = random_trajectory(rng);
    const auto d = avg_direction(t);
    const auto ref = oracle::avg_direction(to_path(t), 1e-6);
    ASSERT_FALSE(d.degenerate);
    EXPECT_NEAR(d.norm(), 1.0, 1e-9);
    EXPECT_NEAR(d.dx, ref.real(), 1e-9);
    EXPECT_NEAR(d.dy, ref.imag(), 1e-9);
  }
}

TEST(MeanDirection, Singleton) {
  const DirectionVector v{1.0, 0.0, false};
  const auto m = mean_direction(std::vector{v});
  EXPECT_NEAR(m.dx, 1.0, 1e-5);
  EXPECT_NEAR(m.dy, 0.0, 1e-12);
}

TEST(MeanDirection, Orthogonal) {
  const auto m = mean_direction(std::vector<DirectionVector>{{1, 0, false}, {0, 1, false}});
  EXPECT_NEAR(m.dx, 0.7071, 1e-4);
  EXPECT_NEAR(m.dy, 0.7071, 1e-4);
  // The epsilon in the denominator keeps the result just inside the unit circle.
  EXPECT_NEAR(m.norm(), std::sqrt(0.5) / (std::sqrt(0.5) + 1e-6), 1e-12);
}

TEST(MeanDirection, AntipodalIsDegenerate) {
  const auto m = mean_direction(std::vector<DirectionVector>{{1, 0, false}, {-1, 0, false}});
  EXPECT_TRUE(m.degenerate);
}

TEST(MeanDirection, EmptyThrows) {
  EXPECT_THROW(mean_direction(std::vector<DirectionVector>{}), InvalidInput);
}

}  // namespace
}  // namespace planloop
