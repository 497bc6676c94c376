#pragma once

// Failure detection from periodic heartbeats. Heartbeat slot s is sent at
// s*P and counts only if it arrives before (s+1)*P; a node is suspected at
// the boundary that closes its k-th consecutive missed slot.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "floodcast/simnet/scenario.hpp"
#include "floodcast/simnet/topology.hpp"
#include "floodcast/simnet/trace.hpp"

namespace floodcast::simnet {

class HeartbeatMonitor {
public:
  HeartbeatMonitor(std::int64_t period_ticks, int k, std::vector<int> watched)
      : period_(period_ticks), k_(k), watched_(std::move(watched)) {}

  std::int64_t period() const { return period_; }

  void record(int node, std::int64_t slot, std::int64_t arrival_tick) {
    if (slot >= 0 && arrival_tick < (slot + 1) * period_)
      received_[node].insert(slot);
  }

  /// Closes `slot` at tick (slot+1)*P and returns nodes newly suspected.
  std::vector<int> close_slot(std::int64_t slot) {
    std::vector<int> flagged;
    for (int node : watched_) {
      if (suspected_.count(node))
        continue;
      auto &miss = missed_[node];
      miss = received_[node].count(slot) ? 0 : miss + 1;
      if (miss >= k_) {
        suspected_.insert(node);
        flagged.push_back(node);
      }
    }
    return flagged;
  }

  const std::set<int> &suspected() const { return suspected_; }

private:
  std::int64_t period_;
  int k_;
  std::vector<int> watched_;
  std::map<int, std::set<std::int64_t>> received_;
  std::map<int, int> missed_;
  std::set<int> suspected_;
};

inline std::vector<int> computational_nodes(const Network &net) {
  std::vector<int> out;
  for (const auto &n : net.nodes)
    if (n.kind == NodeKind::Computational)
      out.push_back(n.id);
  return out;
}

/// Replays the heartbeat deliveries recorded in a trace window and returns
/// the computational nodes suspected by `window_end` (minutes), in the order
/// they were flagged.
inline std::vector<FailureFlag> detect_failures(const Network &net,
                                                std::span<const SimEvent> window,
                                                double window_end) {
  const std::int64_t period = to_ticks(net.heartbeat_period);
  HeartbeatMonitor monitor(period, net.missed_heartbeats,
                           computational_nodes(net));
  std::vector<const SimEvent *> beats;
  for (const auto &e : window)
    if (e.kind == "deliver" && e.field("payload") == "heartbeat" &&
        e.field("corrupted") == "0")
      beats.push_back(&e);
  std::sort(beats.begin(), beats.end(),
            [](const SimEvent *a, const SimEvent *b) {
              return a->tick < b->tick;
            });
  std::vector<FailureFlag> out;
  const std::int64_t end = to_ticks(window_end);
  std::size_t next = 0;
  for (std::int64_t slot = 0; (slot + 1) * period <= end; ++slot) {
    const std::int64_t boundary = (slot + 1) * period;
    for (; next < beats.size() && beats[next]->tick < boundary; ++next)
      monitor.record(std::stoi(*beats[next]->field("src")),
                     std::stoll(*beats[next]->field("slot")),
                     beats[next]->tick);
    for (int node : monitor.close_slot(slot))
      out.push_back({node, to_minutes(boundary)});
  }
  return out;
}

} // namespace floodcast::simnet
