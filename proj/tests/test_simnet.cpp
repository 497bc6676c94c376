#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "floodcast/simnet.hpp"
#include "sim_fixtures.hpp"

using namespace floodcast;
using namespace floodcast::simnet;

namespace {

std::size_t count_kind(const SimTrace &t, const std::string &kind) {
  return static_cast<std::size_t>(
      std::count_if(t.events.begin(), t.events.end(),
                    [&](const SimEvent &e) { return e.kind == kind; }));
}

} // namespace

TEST(Topology, ThreeZoneChain) {
  const auto s = fixture::three_zones();
  const auto net = build_topology(s);
  EXPECT_EQ(net.count(NodeKind::Sensor), 3u);
  EXPECT_EQ(net.count(NodeKind::Computational), 3u);
  EXPECT_EQ(net.count(NodeKind::Intermediate), 1u);
  EXPECT_EQ(net.count(NodeKind::Office), 1u);
  EXPECT_EQ(net.predictors.size(), 3u);
  EXPECT_EQ(net.office_predictors.size(), 3u);
  EXPECT_EQ(net.route_next(1, 11), 11);
  EXPECT_EQ(net.route_next(1, 30), 20);
  EXPECT_EQ(net.route_next(11, 30), 20);
}

TEST(Topology, Errors) {
  auto s = fixture::single_zone();
  s.nodes[2].links = {2};
  s.nodes[3].links = {};
  EXPECT_THROW(build_topology(s), DisconnectedTopology);
  try {
    build_topology(s);
  } catch (const DisconnectedTopology &e) {
    EXPECT_EQ(e.node(), 2);
  }

  s = fixture::single_zone();
  s.nodes[3].id = 1;
  EXPECT_THROW(build_topology(s), DuplicateId);

  s = fixture::single_zone();
  s.nodes[0].links = {2, 3};
  EXPECT_THROW(build_topology(s), ScenarioError);

  s = fixture::single_zone();
  s.channel.loss = 1.5;
  try {
    build_topology(s);
    FAIL();
  } catch (const ScenarioError &e) {
    EXPECT_EQ(e.path(), "channel.loss");
  }
}

TEST(Topology, RoutesPreferLowestIdOnTies) {
  Scenario s = fixture::single_zone();
  // Two equal-length relays between computational 2 and office 4.
  s.nodes = {fixture::node(1, NodeKind::Sensor, 0, {2}),
             fixture::node(2, NodeKind::Computational, 0, {1, 5, 3}),
             fixture::node(3, NodeKind::Intermediate, 0, {2, 4}),
             fixture::node(5, NodeKind::Intermediate, 0, {2, 4}),
             fixture::node(4, NodeKind::Office, 0, {3, 5})};
  const auto net = build_topology(s);
  EXPECT_EQ(net.route_next(2, 4), 3);
}

TEST(Topology, NearestPeerTieBreak) {
  Scenario s;
  s.nodes = {fixture::node(10, NodeKind::Computational, 0, {20}),
             fixture::node(12, NodeKind::Computational, 1, {20}),
             fixture::node(11, NodeKind::Computational, 2, {20}),
             fixture::node(20, NodeKind::Intermediate, 0, {10, 11, 12, 30}),
             fixture::node(30, NodeKind::Office, 0, {20})};
  const auto net = build_topology(s);
  EXPECT_EQ(nearest_peer(net, 10, {10}), 11);
  EXPECT_EQ(nearest_peer(net, 10, {10, 11}), 12);
  EXPECT_FALSE(nearest_peer(net, 10, {10, 11, 12}));
}

TEST(Power, Examples) {
  NodeSpec sensor;
  sensor.kind = NodeKind::Sensor;
  sensor.power = {15.0, 60.0, 2.0, 0.01};
  EXPECT_DOUBLE_EQ(power_step(sensor, PowerState::Idle, 600.0), 1200.0);
  EXPECT_GT(power_step(sensor, PowerState::Awake, 5.0),
            power_step(sensor, PowerState::Idle, 5.0));
  EXPECT_THROW(power_step(sensor, PowerState::Idle, -1.0), InvalidInput);

  NodeSpec watch = sensor;
  watch.kind = NodeKind::EventWatch;
  const auto idle = components(NodeKind::EventWatch, PowerState::Idle);
  EXPECT_TRUE(idle.sensing);
  EXPECT_FALSE(idle.transmit);
  EXPECT_DOUBLE_EQ(power_step(watch, PowerState::Idle, 10.0), 170.0);
}

TEST(Power, AwakeAlwaysCostsMore) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> draw(1e-3, 100.0), dur(0.1, 1e4);
  for (int i = 0; i < 500; ++i) {
    NodeSpec n;
    n.kind = static_cast<NodeKind>(i % 5);
    n.power = {draw(rng), draw(rng), draw(rng), draw(rng)};
    const double d = dur(rng);
    ASSERT_GT(power_step(n, PowerState::Transmitting, d),
              power_step(n, PowerState::Idle, d));
  }
}

TEST(Heartbeat, FlaggedAtKthMissedBoundary) {
  HeartbeatMonitor m(600, 3, {5});
  std::vector<int> flagged_at;
  for (std::int64_t slot = 0; slot < 20; ++slot) {
    if (slot * 600 < 100 * 60)
      m.record(5, slot, slot * 600 + 2);
    if (!m.close_slot(slot).empty())
      flagged_at.push_back(static_cast<int>((slot + 1) * 600 / 60));
  }
  EXPECT_EQ(flagged_at, (std::vector<int>{130}));
}

TEST(Heartbeat, LateBeatCountsAsMissed) {
  HeartbeatMonitor m(600, 1, {5});
  m.record(5, 0, 600);
  EXPECT_EQ(m.close_slot(0), (std::vector<int>{5}));
}

TEST(Simulation, LosslessOfficeAlarmsBeforeCrossing) {
  const auto s = fixture::single_zone();
  const auto trace = run_simulation(build_topology(s), s);
  ASSERT_FALSE(trace.alarms.empty());
  EXPECT_LT(to_minutes(trace.alarms.front().tick), fixture::kCrossing);
  EXPECT_TRUE(trace.failures.empty());
  EXPECT_EQ(trace.messages.dropped, 0u);
}

TEST(Simulation, DeterministicForSeed) {
  auto s = fixture::three_zones();
  s.channel.loss = 0.1;
  s.channel.corruption = 0.1;
  s.sensor_noise = 0.02;
  const auto net = build_topology(s);
  const auto a = serialize(run_simulation(net, s));
  const auto b = serialize(run_simulation(net, s));
  EXPECT_EQ(a, b);
  s.seed += 1;
  EXPECT_NE(a, serialize(run_simulation(build_topology(s), s)));
}

TEST(Simulation, OfficeMatchesComputationalWhenLossless) {
  const auto s = fixture::three_zones();
  const auto trace = run_simulation(build_topology(s), s);
  std::map<std::pair<int, double>, double> comp, office;
  for (const auto &p : trace.predictions) {
    if (!p.output.predicted_level)
      continue;
    auto &dst = p.node == 30 ? office : comp;
    dst[{p.zone, p.reading.t}] = *p.output.predicted_level;
  }
  ASSERT_FALSE(comp.empty());
  EXPECT_EQ(comp.size(), office.size());
  for (const auto &[key, v] : comp) {
    ASSERT_TRUE(office.count(key));
    EXPECT_NEAR(office.at(key), v, 1e-9);
  }
}

TEST(Simulation, FullCorruptionNeverPredictsFromCorruptedPayload) {
  auto s = fixture::single_zone();
  s.channel.overrides.push_back({1, 2, std::nullopt, 1.0, std::nullopt});
  const auto result = simulate(build_topology(s), s);
  const auto &trace = result.trace;
  EXPECT_TRUE(trace.predictions.empty());
  std::set<std::string> corrupted, answered;
  for (const auto &e : trace.events) {
    if (e.kind == "deliver" && e.field("payload") == "reading") {
      EXPECT_EQ(e.field("corrupted"), "1");
      corrupted.insert(*e.field("msg"));
    }
    if (e.kind == "send" && e.field("payload") == "resample")
      answered.insert(*e.field("in_reply_to"));
  }
  EXPECT_FALSE(corrupted.empty());
  EXPECT_EQ(corrupted, answered);
  for (const auto &p : trace.predictions)
    EXPECT_FALSE(p.reading.corrupted);
}

TEST(Simulation, PartialCorruptionOnlyCleanReadingsPredicted) {
  auto s = fixture::single_zone(0.0, 0.3, 5);
  const auto result = simulate(build_topology(s), s);
  ASSERT_FALSE(result.trace.predictions.empty());
  for (const auto &p : result.trace.predictions) {
    EXPECT_FALSE(result.messages[p.message].corrupted);
    EXPECT_FALSE(p.reading.corrupted);
  }
}

TEST(Simulation, MessageConservationAndCausality) {
  auto s = fixture::three_zones(3);
  s.channel.loss = 0.2;
  s.channel.corruption = 0.05;
  s.failures.push_back({12, 200.0});
  const auto result = simulate(build_topology(s), s);
  const auto &trace = result.trace;
  EXPECT_EQ(trace.messages.sent, trace.messages.delivered +
                                     trace.messages.dropped +
                                     trace.messages.in_flight);
  EXPECT_EQ(trace.messages.sent, result.messages.size());
  for (const auto &m : result.messages) {
    EXPECT_FALSE(m.dropped && m.deliver_tick);
    if (m.deliver_tick) {
      EXPECT_GE(*m.deliver_tick, m.send_tick);
    }
  }
  for (const auto &p : trace.predictions) {
    const auto &m = result.messages[p.message];
    ASSERT_TRUE(m.deliver_tick);
    EXPECT_GE(p.tick, *m.deliver_tick);
  }
}

TEST(Simulation, EventsOrderedAndEnergyMonotone) {
  auto s = fixture::three_zones(4);
  s.channel.loss = 0.1;
  s.failures.push_back({13, 300.0});
  const auto trace = run_simulation(build_topology(s), s);
  for (std::size_t i = 1; i < trace.events.size(); ++i) {
    const auto &a = trace.events[i - 1];
    const auto &b = trace.events[i];
    ASSERT_LE(std::tie(a.tick, a.node, a.seq), std::tie(b.tick, b.node, b.seq))
        << i;
  }
  for (const auto &[node, ledger] : trace.energy)
    for (std::size_t i = 1; i < ledger.size(); ++i) {
      ASSERT_GE(ledger[i].tick, ledger[i - 1].tick);
      ASSERT_GE(ledger[i].millijoules, ledger[i - 1].millijoules);
    }
}

TEST(Simulation, SleepingSensorsUseLessThanAwake) {
  const auto s = fixture::single_zone();
  const auto trace = run_simulation(build_topology(s), s);
  const auto &sensor = s.nodes[0];
  const double horizon_s = s.horizon * 60.0;
  const double all_idle = power_step(sensor, PowerState::Idle, horizon_s);
  const double all_awake = power_step(sensor, PowerState::Awake, horizon_s);
  EXPECT_GT(trace.final_energy(1), all_idle);
  EXPECT_LT(trace.final_energy(1), all_awake);
}

TEST(Simulation, FailureFlaggedAndZoneTakenOver) {
  auto s = fixture::three_zones();
  s.heartbeat_period = 10.0;
  s.missed_heartbeats = 3;
  s.failures.push_back({12, 100.0});
  const auto net = build_topology(s);
  const auto trace = run_simulation(net, s);
  ASSERT_EQ(trace.failures.size(), 1u);
  EXPECT_EQ(trace.failures[0], (FailureFlag{12, 130.0}));
  EXPECT_EQ(detect_failures(net, trace.events, s.horizon), trace.failures);

  bool took_over = false;
  for (const auto &e : trace.events)
    if (e.kind == "takeover") {
      EXPECT_EQ(e.field("zone"), "1");
      EXPECT_EQ(e.field("to"), "11");
      took_over = true;
    }
  EXPECT_TRUE(took_over);
  bool zone1_after = false;
  for (const auto &p : trace.predictions)
    if (p.node == 11 && p.zone == 1 && p.reading.t > 130.0)
      zone1_after = true;
  EXPECT_TRUE(zone1_after);
}

TEST(Simulation, NoFailuresNoFlags) {
  const auto s = fixture::three_zones();
  const auto net = build_topology(s);
  const auto trace = run_simulation(net, s);
  EXPECT_TRUE(trace.failures.empty());
  EXPECT_TRUE(detect_failures(net, trace.events, s.horizon).empty());
}

TEST(Simulation, QueryTriggerSamplesImmediately) {
  auto s = fixture::single_zone();
  s.triggers.push_back({97.0, TriggerKind::Query, 0});
  const auto trace = run_simulation(build_topology(s), s);
  bool sampled = false;
  for (const auto &e : trace.events)
    if (e.kind == "sample" && e.tick > to_ticks(97.0) &&
        e.tick < to_ticks(97.0) + 60)
      sampled = true;
  EXPECT_TRUE(sampled);
  EXPECT_EQ(count_kind(trace, "trigger"), 1u);
}

TEST(Simulation, EventWatchFiresOnAbruptChange) {
  auto s = fixture::three_zones();
  auto samples = s.environment[2].samples();
  for (auto &x : samples)
    if (x.t >= 230.0 && x.t <= 260.0)
      x.level += 1.5;
  s.environment[2] = EnvironmentTrace(samples);
  const auto trace = run_simulation(build_topology(s), s);
  EXPECT_GT(count_kind(trace, "abrupt_change"), 0u);
  EXPECT_GT(trace.final_energy(4),
            power_step(s.nodes[3], PowerState::Idle, s.horizon * 60.0));
}

TEST(Simulation, HorizonBeyondEnvironment) {
  auto s = fixture::single_zone();
  s.horizon = 800.0;
  EXPECT_THROW(run_simulation(build_topology(s), s), HorizonExceeded);
}

TEST(ScenarioIo, ParsesAndReportsFieldPaths) {
  const auto j = nlohmann::json::parse(R"({
    "seed": 3, "horizon_min": 60,
    "channel": {"loss": 0.1, "links": [{"from": 1, "to": 2, "corruption": 1}]},
    "nodes": [
      {"id": 1, "kind": "sensor", "zone": 0, "links": [2]},
      {"id": 2, "kind": "computational", "zone": 0, "links": [1, 3]},
      {"id": 3, "kind": "office", "links": [2], "power": {"receive_mw": 5}}
    ],
    "environment": [{"zone": 0, "samples": [[0, 5, 1, 100], [60, 6, 2, 110]]}],
    "triggers": [{"t": 10, "kind": "query", "zone": 0}]
  })");
  const auto s = parse_scenario(j);
  EXPECT_EQ(s.seed, 3u);
  EXPECT_EQ(s.nodes.size(), 3u);
  EXPECT_EQ(s.nodes[2].power.receive, 5.0);
  EXPECT_EQ(s.channel.hop(1, 2).corruption, 1.0);
  EXPECT_EQ(s.channel.hop(2, 1).corruption, 0.0);
  EXPECT_DOUBLE_EQ(s.environment.at(0).at(30).level, 5.5);
  EXPECT_NO_THROW(run_simulation(build_topology(s), s));

  auto expect_path = [](const char *text, const std::string &path) {
    try {
      parse_scenario(nlohmann::json::parse(text));
      ADD_FAILURE() << "no error for " << path;
    } catch (const ScenarioError &e) {
      EXPECT_EQ(e.path(), path);
    }
  };
  expect_path(R"({"nodes": []})", "horizon_min");
  expect_path(R"({"horizon_min": 1, "nodes": [{"id": 1, "kind": "dam"}]})",
              "nodes[0].kind");
  expect_path(R"({"horizon_min": 1, "nodes": [], "bogus": 1})", "bogus");
  expect_path(R"({"horizon_min": 1, "nodes": [],
                  "environment": [{"zone": 0, "samples": [[0, 1, 2]]}]})",
              "environment[0].samples[0]");
  expect_path(R"({"horizon_min": 1, "nodes": [],
                  "predictor": {"threshold": 30}})",
              "predictor");
}
