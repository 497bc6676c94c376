#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "floodcast/error.hpp"
#include "floodcast/predictor.hpp"
#include "floodcast/simnet/scenario.hpp"

namespace floodcast::simnet {

using HopTable = std::map<int, int>;

/// Hop counts from `source` over the link graph, skipping `excluded` nodes.
inline std::map<int, int>
hop_distances(const std::map<int, std::vector<int>> &adjacency, int source,
              const std::set<int> &excluded = {}) {
  std::map<int, int> dist{{source, 0}};
  std::deque<int> frontier{source};
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    for (int v : adjacency.at(u)) {
      if (excluded.count(v) || dist.count(v))
        continue;
      dist[v] = dist[u] + 1;
      frontier.push_back(v);
    }
  }
  return dist;
}

struct Network {
  std::vector<NodeSpec> nodes; // ascending id
  std::map<int, std::vector<int>> adjacency; // ascending neighbour ids
  int office = 0;
  std::map<int, int> zone_owner; // zone -> computational node serving it
  std::map<int, std::vector<int>> zone_sensors;
  std::map<int, std::vector<int>> zone_watchers;
  /// destination -> (node -> next hop toward destination)
  std::map<int, HopTable> next_hop;
  std::map<std::pair<int, int>, Predictor> predictors; // (node, zone)
  std::map<int, Predictor> office_predictors;          // zone
  double heartbeat_period = 10.0; // minutes
  int missed_heartbeats = 3;

  const NodeSpec &node(int id) const {
    auto it = std::lower_bound(
        nodes.begin(), nodes.end(), id,
        [](const NodeSpec &n, int v) { return n.id < v; });
    if (it == nodes.end() || it->id != id)
      throw InvalidInput("unknown node " + std::to_string(id));
    return *it;
  }

  std::size_t count(NodeKind k) const {
    return static_cast<std::size_t>(std::count_if(
        nodes.begin(), nodes.end(),
        [k](const NodeSpec &n) { return n.kind == k; }));
  }

  std::optional<int> route_next(int from, int to) const {
    auto t = next_hop.find(to);
    if (t == next_hop.end())
      return std::nullopt;
    auto h = t->second.find(from);
    if (h == t->second.end())
      return std::nullopt;
    return h->second;
  }
};

/// Shortest-hop next-hop table toward `destination`; among equally short
/// continuations the lowest neighbour id wins.
inline HopTable routes_toward(const std::map<int, std::vector<int>> &adj,
                              int destination) {
  const auto dist = hop_distances(adj, destination);
  HopTable table;
  for (const auto &[u, d] : dist) {
    if (u == destination)
      continue;
    for (int v : adj.at(u)) {
      auto dv = dist.find(v);
      if (dv != dist.end() && dv->second == d - 1) {
        table[u] = v;
        break;
      }
    }
  }
  return table;
}

/// Closest live computational node to `failed` by hop count, lowest id on
/// ties. Nodes in `excluded` are neither candidates nor relays.
inline std::optional<int> nearest_peer(const Network &net, int failed,
                                       const std::set<int> &excluded) {
  auto skip = excluded;
  skip.erase(failed);
  const auto dist = hop_distances(net.adjacency, failed, skip);
  std::optional<int> best;
  int best_d = std::numeric_limits<int>::max();
  for (const auto &[id, d] : dist) {
    if (id == failed || net.node(id).kind != NodeKind::Computational)
      continue;
    if (d < best_d) {
      best = id;
      best_d = d;
    }
  }
  return best;
}

inline Predictor make_predictor(const Scenario &s, int zone) {
  Predictor p(s.predictor);
  auto it = s.calibration.find(zone);
  if (it != s.calibration.end() && !it->second.empty())
    p.prime(it->second);
  return p;
}

inline void validate_channel(const Scenario &s) {
  auto probability = [](double p, const std::string &path) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ScenarioError(path, "probability must lie in [0, 1]");
  };
  probability(s.channel.loss, "channel.loss");
  probability(s.channel.corruption, "channel.corruption");
  if (s.channel.latency_s < 1)
    throw ScenarioError("channel.latency_s", "latency must be >= 1 s");
  for (std::size_t i = 0; i < s.channel.overrides.size(); ++i) {
    const auto &o = s.channel.overrides[i];
    const std::string path = "channel.links[" + std::to_string(i) + "]";
    if (o.loss)
      probability(*o.loss, path + ".loss");
    if (o.corruption)
      probability(*o.corruption, path + ".corruption");
    if (o.latency_s && *o.latency_s < 1)
      throw ScenarioError(path + ".latency_s", "latency must be >= 1 s");
  }
}

inline Network build_topology(const Scenario &scenario) {
  Network net;
  net.nodes = scenario.nodes;
  std::set<int> ids;
  for (const auto &n : net.nodes)
    if (!ids.insert(n.id).second)
      throw DuplicateId(n.id);
  std::sort(net.nodes.begin(), net.nodes.end(),
            [](const NodeSpec &a, const NodeSpec &b) { return a.id < b.id; });

  for (std::size_t i = 0; i < scenario.nodes.size(); ++i) {
    const auto &n = scenario.nodes[i];
    const std::string path = "nodes[" + std::to_string(i) + "]";
    auto &adj = net.adjacency[n.id];
    for (int v : n.links) {
      if (v == n.id)
        throw ScenarioError(path + ".links", "node links to itself");
      if (!ids.count(v))
        throw ScenarioError(path + ".links",
                            "unknown node " + std::to_string(v));
      adj.push_back(v);
    }
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  for (std::size_t i = 0; i < scenario.nodes.size(); ++i) {
    const auto &n = scenario.nodes[i];
    for (int v : net.adjacency[n.id]) {
      const auto &back = net.adjacency[v];
      if (!std::binary_search(back.begin(), back.end(), n.id))
        throw ScenarioError("nodes[" + std::to_string(i) + "].links",
                            "link to " + std::to_string(v) +
                                " is not symmetric");
    }
  }

  if (net.count(NodeKind::Office) != 1)
    throw ScenarioError("nodes", "exactly one office node is required");
  for (std::size_t i = 0; i < scenario.nodes.size(); ++i) {
    const auto &n = scenario.nodes[i];
    const std::string path = "nodes[" + std::to_string(i) + "].zone";
    switch (n.kind) {
    case NodeKind::Office:
      net.office = n.id;
      break;
    case NodeKind::Computational:
      if (!net.zone_owner.emplace(n.zone, n.id).second)
        throw ScenarioError(path, "zone " + std::to_string(n.zone) +
                                      " already has a computational node");
      break;
    case NodeKind::Sensor:
      net.zone_sensors[n.zone].push_back(n.id);
      break;
    case NodeKind::EventWatch:
      net.zone_watchers[n.zone].push_back(n.id);
      break;
    case NodeKind::Intermediate:
      break;
    }
  }
  for (auto *group : {&net.zone_sensors, &net.zone_watchers})
    for (auto &[zone, members] : *group) {
      std::sort(members.begin(), members.end());
      if (!net.zone_owner.count(zone))
        throw ScenarioError("nodes", "zone " + std::to_string(zone) +
                                         " has no computational node");
    }

  for (const auto &n : net.nodes)
    net.next_hop[n.id] = routes_toward(net.adjacency, n.id);
  for (const auto &[zone, comp] : net.zone_owner)
    if (!net.route_next(comp, net.office))
      throw DisconnectedTopology(comp);
  for (const auto *group : {&net.zone_sensors, &net.zone_watchers})
    for (const auto &[zone, members] : *group)
      for (int s : members)
        if (!net.route_next(s, net.zone_owner.at(zone)))
          throw DisconnectedTopology(s);

  validate_channel(scenario);
  if (!(scenario.horizon > 0.0))
    throw ScenarioError("horizon_min", "horizon must be positive");
  if (!(scenario.heartbeat_period > 0.0))
    throw ScenarioError("heartbeat_min", "heartbeat period must be positive");
  if (scenario.missed_heartbeats < 1)
    throw ScenarioError("missed_heartbeats", "must be at least 1");
  if (scenario.sample_s < 1 || scenario.transmit_s < 1)
    throw ScenarioError("sample_s", "durations must be >= 1 s");
  try {
    scenario.predictor.validate();
  } catch (const InvalidInput &e) {
    throw ScenarioError("predictor", e.what());
  }

  for (std::size_t i = 0; i < scenario.failures.size(); ++i) {
    const auto &f = scenario.failures[i];
    const std::string path = "failures[" + std::to_string(i) + "]";
    if (!ids.count(f.node))
      throw ScenarioError(path + ".node", "unknown node " +
                                              std::to_string(f.node));
    if (!(f.t >= 0.0))
      throw ScenarioError(path + ".t", "failure time must be >= 0");
  }
  for (std::size_t i = 0; i < scenario.triggers.size(); ++i) {
    const auto &t = scenario.triggers[i];
    const std::string path = "triggers[" + std::to_string(i) + "]";
    if (!net.zone_owner.count(t.zone))
      throw ScenarioError(path + ".zone", "no computational node serves zone " +
                                              std::to_string(t.zone));
    if (t.kind != TriggerKind::Event && t.kind != TriggerKind::Query)
      throw ScenarioError(path + ".kind", "scripted triggers are event or "
                                          "query");
    if (!(t.t >= 0.0))
      throw ScenarioError(path + ".t", "trigger time must be >= 0");
  }
  if (scenario.event_watch.period_s < 1)
    throw ScenarioError("event_watch.period_s", "period must be >= 1 s");

  net.heartbeat_period = scenario.heartbeat_period;
  net.missed_heartbeats = scenario.missed_heartbeats;
  for (const auto &[zone, comp] : net.zone_owner) {
    net.predictors.emplace(std::pair{comp, zone},
                           make_predictor(scenario, zone));
    net.office_predictors.emplace(zone, make_predictor(scenario, zone));
  }
  return net;
}

} // namespace floodcast::simnet
