#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "floodcast/trend.hpp"
#include "oracles.hpp"

using namespace floodcast;

namespace {

LevelSeries series(const std::vector<double> &levels, double dt = 1.0) {
  std::vector<LevelSample> s;
  for (std::size_t i = 0; i < levels.size(); ++i)
    s.push_back({static_cast<double>(i) * dt, levels[i]});
  return LevelSeries(s);
}

std::vector<double> levels_of(const LevelSeries &s) {
  std::vector<double> out;
  for (const auto &x : s.samples())
    out.push_back(x.level);
  return out;
}

} // namespace

TEST(LevelSeries, Invariants) {
  EXPECT_THROW(LevelSeries({{1.0, 2.0}, {1.0, 3.0}}), InvalidInput);
  EXPECT_THROW(LevelSeries({{0.0, -1.0}}), InvalidInput);
  LevelSeries s = series({1, 2, 3, 4, 5});
  s.retain_last(2);
  EXPECT_EQ(levels_of(s), (std::vector<double>{4, 5}));
}

TEST(RisingSegment, Examples) {
  EXPECT_FALSE(detect_rising_segment(series({9, 8, 7})));
  EXPECT_FALSE(detect_rising_segment(series({3})));
  EXPECT_FALSE(detect_rising_segment(series({1, 4, 4})));

  const auto all = detect_rising_segment(series({1, 2, 3, 4}));
  ASSERT_TRUE(all);
  EXPECT_EQ(all->size(), 4u);

  const auto tail = detect_rising_segment(series({5, 4, 3, 4, 5, 6}));
  ASSERT_TRUE(tail);
  EXPECT_EQ(levels_of(*tail), (std::vector<double>{3, 4, 5, 6}));
  EXPECT_DOUBLE_EQ((*tail)[0].t, 2.0);

  const auto plateau = detect_rising_segment(series({5, 3, 3, 3, 4}));
  ASSERT_TRUE(plateau);
  EXPECT_DOUBLE_EQ((*plateau)[0].t, 1.0);
}

TEST(RisingSegment, MatchesBruteForceScan) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> len(1, 12), val(0, 6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(len(rng));
    for (double &x : v)
      x = val(rng);
    const auto seg = detect_rising_segment(series(v));
    const auto start = oracle::rising_start(v);
    ASSERT_EQ(seg.has_value(), start.has_value());
    if (!seg)
      continue;
    ASSERT_EQ(seg->size(), v.size() - *start);
    const auto lv = levels_of(*seg);
    EXPECT_GT(lv[lv.size() - 1], lv[lv.size() - 2]);
    for (double x : lv)
      EXPECT_LE(lv.front(), x);
  }
}

TEST(QuadraticFit, Examples) {
  const auto m = quadratic_fit(series({1, 2, 5}), 10.0);
  EXPECT_NEAR(m.a1, 1.0, 1e-12);
  EXPECT_NEAR(m.a2, 0.0, 1e-12);
  EXPECT_NEAR(m.a3, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.last_x, 2.0);

  const auto c = quadratic_fit(series({3.5, 3.5, 3.5}), 10.0);
  EXPECT_NEAR(c.a1, 0.0, 1e-12);
  EXPECT_NEAR(c.a2, 0.0, 1e-12);
  EXPECT_NEAR(c.a3, 3.5, 1e-12);
}

TEST(QuadraticFit, NoisyPointsMatchCramerOracle) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> xs, ys;
  std::vector<LevelSample> s;
  for (int i = 0; i < 6; ++i) {
    const double x = 0.7 * i;
    const double y = 2 * x * x + 1 + noise(rng);
    xs.push_back(x);
    ys.push_back(y);
    s.push_back({100.0 + x, y});
  }
  const auto m = quadratic_fit(LevelSeries(s), 5.0);
  const auto ref = oracle::quadratic(xs, ys);
  EXPECT_NEAR(m.a1, ref[0], 1e-8);
  EXPECT_NEAR(m.a2, ref[1], 1e-8);
  EXPECT_NEAR(m.a3, ref[2], 1e-8);
  EXPECT_DOUBLE_EQ(m.origin_time, 100.0);
}

TEST(QuadraticFit, ShortSegments) {
  const auto line = quadratic_fit(series({2, 3}, 5.0), 10.0);
  EXPECT_EQ(line.a1, 0.0);
  EXPECT_DOUBLE_EQ(line.a2, 0.2);
  EXPECT_DOUBLE_EQ(line.a3, 2.0);
  const auto point = quadratic_fit(series({4}), 10.0);
  EXPECT_EQ(point.a3, 4.0);
  EXPECT_THROW(quadratic_fit(series({1, 2, 3}), 0.0), InvalidInput);
}

TEST(PredictCrossing, Examples) {
  QuadraticModel m;
  m.a1 = 1.0;
  m.last_x = 2.0;
  m.reliability_period = 10.0;
  const auto c = predict_crossing(m, 25.0);
  ASSERT_TRUE(c);
  EXPECT_NEAR(*c, 3.0, 1e-12);

  m.reliability_period = 2.0;
  EXPECT_FALSE(predict_crossing(m, 25.0));

  QuadraticModel down;
  down.a1 = -1.0;
  down.reliability_period = 100.0;
  EXPECT_FALSE(predict_crossing(down, 0.5));

  QuadraticModel above;
  above.a3 = 30.0;
  EXPECT_EQ(predict_crossing(above, 25.0), 0.0);
}

TEST(PredictCrossing, LinearDegeneracy) {
  QuadraticModel m;
  m.a2 = 0.5;
  m.a3 = 20.0;
  m.last_x = 4.0;
  m.reliability_period = 20.0;
  const auto c = predict_crossing(m, 25.0);
  ASSERT_TRUE(c);
  EXPECT_NEAR(*c, 6.0, 1e-12);
}

TEST(PredictCrossing, AgreesWithDenseGrid) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> ua(-0.5, 0.5), ub(-2.0, 3.0),
      uc(0.0, 20.0), ux(0.0, 10.0), uh(1.0, 15.0), uf(1.0, 40.0);
  const double h = 1e-3;
  for (int trial = 0; trial < 300; ++trial) {
    QuadraticModel m;
    m.a1 = ua(rng);
    m.a2 = ub(rng);
    m.a3 = uc(rng);
    m.last_x = ux(rng);
    m.reliability_period = uh(rng);
    const double line = uf(rng);
    const auto got = predict_crossing(m, line);
    const auto ref = oracle::grid_crossing(m.a1, m.a2, m.a3, m.last_x,
                                           m.reliability_period, line, h);
    if (ref) {
      ASSERT_TRUE(got) << "trial " << trial;
      EXPECT_LE(*ref - *got, h + 1e-9);
      EXPECT_GE(*ref - *got, -1e-9);
    } else if (got) {
      // Only a crossing inside the last partial grid cell may be missed.
      EXPECT_GT(*got, m.reliability_period - h);
    }
  }
}
