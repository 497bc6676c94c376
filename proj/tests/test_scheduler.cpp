#include <gtest/gtest.h>

#include <random>

#include "floodcast/scheduler.hpp"

using namespace floodcast;

TEST(TimeSet, Validation) {
  TimeSet ts;
  EXPECT_NO_THROW(ts.validate());
  ts.intervals = {5, 5};
  EXPECT_THROW(ts.validate(), InvalidInput);
  ts.intervals = {};
  EXPECT_THROW(ts.validate(), InvalidInput);
  ts = TimeSet{};
  ts.action_time = 0;
  EXPECT_THROW(ts.validate(), InvalidInput);
}

TEST(TimeMultiplier, Anchors) {
  const TimeSet ts;
  const double fl = 25.0;
  EXPECT_EQ(time_multiplier(0.0, 0.9 * fl, fl, ts), 5.0);
  EXPECT_EQ(time_multiplier(0.0, 0.9 * fl, fl, ts), 5.0);
  EXPECT_EQ(time_multiplier(1.0, 1.0 + 0.9 * fl, fl, ts), 5.0);
  EXPECT_EQ(time_multiplier(0.0, 0.0, fl, ts), 60.0);
  EXPECT_EQ(time_multiplier(0.1, 0.1, fl, ts), 60.0);
}

TEST(TimeMultiplier, MonotoneInUrgency) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> lv(0.0, 40.0);
  TimeSet ts;
  for (int i = 0; i < 2000; ++i) {
    ts.divisor = 1 + i % 4;
    const double a0 = lv(rng), a1 = lv(rng), b0 = lv(rng), b1 = lv(rng);
    const double ua = urgency(a0, a1, 25.0), ub = urgency(b0, b1, 25.0);
    const double ia = time_multiplier(a0, a1, 25.0, ts);
    const double ib = time_multiplier(b0, b1, 25.0, ts);
    if (ua >= ub) {
      ASSERT_LE(ia, ib);
    }
    ASSERT_GE(ia, ts.action_time);
  }
}

TEST(Recalibrate, Examples) {
  TimeSet ts;
  const auto r = recalibrate(ts, 20.0, 60.0);
  EXPECT_LT(r.interval, 20.0);
  EXPECT_GE(r.interval, 5.0);
  EXPECT_FALSE(r.alarm);
  EXPECT_GT(r.time_set.divisor, 1);

  const auto a = recalibrate(ts, 3.0, 60.0);
  EXPECT_TRUE(a.alarm);
  EXPECT_EQ(a.interval, 5.0);

  const auto none = recalibrate(ts, std::nullopt, 30.0);
  EXPECT_EQ(none.interval, 30.0);
  EXPECT_EQ(none.time_set.divisor, ts.divisor);
  EXPECT_FALSE(none.alarm);
}

TEST(Recalibrate, DividingPreservesOrder) {
  TimeSet ts;
  ts.intervals = {2, 7, 20, 45, 90};
  for (int d = 1; d < 30; ++d) {
    ts.divisor = d;
    for (std::size_t i = 1; i < ts.size(); ++i)
      EXPECT_LT(ts.effective(i - 1), ts.effective(i));
  }
}

TEST(Recalibrate, DivisorResetsAfterTwoCalmReadings) {
  TimeSet ts;
  ts.divisor = 4;
  ts = observe_urgency(ts, 0.01);
  EXPECT_EQ(ts.divisor, 4);
  ts = observe_urgency(ts, 0.5);
  ts = observe_urgency(ts, 0.01);
  EXPECT_EQ(ts.divisor, 4);
  ts = observe_urgency(ts, 0.02);
  EXPECT_EQ(ts.divisor, 1);
}

TEST(TriggerQueue, OrdersByTimeThenOrigin) {
  TriggerQueue q;
  q.push({TriggerKind::Query, 10.0, 7});
  q.push({TriggerKind::Event, 10.0, 3});
  q.push({TriggerKind::SystemInterrupt, 4.0, 9});
  EXPECT_FALSE(q.pop_due(3.0));
  EXPECT_EQ(q.pop_due(100.0)->origin, 9);
  EXPECT_EQ(q.pop_due(100.0)->origin, 3);
  EXPECT_EQ(q.pop_due(100.0)->origin, 7);
  EXPECT_TRUE(q.empty());
}

TEST(NextWakeup, Examples) {
  const TimeSet ts;
  const auto q = next_wakeup(ts, 10.0, 60.0,
                             Trigger{TriggerKind::Query, 10.0, 1});
  EXPECT_EQ(q.kind, WakeAction::Kind::SampleNow);
  const auto w = next_wakeup(ts, 0.0, 60.0, std::nullopt);
  EXPECT_EQ(w.kind, WakeAction::Kind::WaitUntil);
  EXPECT_EQ(w.at, 60.0);
  const auto s = next_wakeup(ts, 0.0, 60.0,
                             Trigger{TriggerKind::SystemInterrupt, 0.0, 1});
  EXPECT_EQ(s.kind, WakeAction::Kind::SampleNow);
  const auto t = next_wakeup(ts, 0.0, 60.0, Trigger{TriggerKind::Time, 0, 1});
  EXPECT_EQ(t.kind, WakeAction::Kind::WaitUntil);
  EXPECT_THROW(next_wakeup(ts, 0.0, 0.0, std::nullopt), InvalidInput);
}
