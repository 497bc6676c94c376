#pragma once

// Plain description of a simulated deployment: the nodes and their radio
// links, the channel, the environment each zone experiences, and the
// scripted triggers and failures. Times are in minutes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floodcast/error.hpp"
#include "floodcast/predictor.hpp"
#include "floodcast/reading.hpp"
#include "floodcast/scheduler.hpp"

namespace floodcast::simnet {

enum class NodeKind { Sensor, Computational, Intermediate, Office, EventWatch };

inline std::string to_string(NodeKind k) {
  switch (k) {
  case NodeKind::Sensor:
    return "sensor";
  case NodeKind::Computational:
    return "computational";
  case NodeKind::Intermediate:
    return "intermediate";
  case NodeKind::Office:
    return "office";
  case NodeKind::EventWatch:
    return "eventwatch";
  }
  return "unknown";
}

inline std::optional<NodeKind> node_kind_from_string(const std::string &s) {
  for (NodeKind k : {NodeKind::Sensor, NodeKind::Computational,
                     NodeKind::Intermediate, NodeKind::Office,
                     NodeKind::EventWatch})
    if (to_string(k) == s)
      return k;
  return std::nullopt;
}

/// Per-component draw in milliwatts. `sleep` is the residual draw of a node
/// that has failed or been switched off.
struct PowerProfile {
  double sensing = 15.0;
  double transmit = 60.0;
  double receive = 2.0;
  double sleep = 0.01;

  friend bool operator==(const PowerProfile &,
                         const PowerProfile &) = default;
};

struct NodeSpec {
  int id = 0;
  NodeKind kind = NodeKind::Sensor;
  int zone = 0;
  std::vector<int> links;
  PowerProfile power;
};

struct LinkOverride {
  int from = 0;
  int to = 0;
  std::optional<double> loss;
  std::optional<double> corruption;
  std::optional<std::int64_t> latency_s;
};

struct HopModel {
  double loss = 0.0;
  double corruption = 0.0;
  std::int64_t latency_s = 1;
};

struct ChannelModel {
  double loss = 0.0;
  double corruption = 0.0;
  std::int64_t latency_s = 1;
  std::vector<LinkOverride> overrides;

  /// Parameters for the directed hop from -> to.
  HopModel hop(int from, int to) const {
    HopModel h{loss, corruption, latency_s};
    for (const auto &o : overrides) {
      if (o.from != from || o.to != to)
        continue;
      if (o.loss)
        h.loss = *o.loss;
      if (o.corruption)
        h.corruption = *o.corruption;
      if (o.latency_s)
        h.latency_s = *o.latency_s;
    }
    return h;
  }
};

struct EnvironmentSample {
  double t = 0.0;
  double rainfall = 0.0;
  double discharge = 0.0;
  double level = 0.0;
};

/// Piecewise-linear environment of one zone.
class EnvironmentTrace {
public:
  EnvironmentTrace() = default;
  explicit EnvironmentTrace(std::vector<EnvironmentSample> samples)
      : samples_(std::move(samples)) {
    for (std::size_t i = 1; i < samples_.size(); ++i)
      if (!(samples_[i].t > samples_[i - 1].t))
        throw InvalidInput("environment times must strictly increase");
  }

  const std::vector<EnvironmentSample> &samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  double start() const { return samples_.front().t; }
  double end() const { return samples_.back().t; }
  bool covers(double t) const {
    return !samples_.empty() && t >= start() && t <= end();
  }

  EnvironmentSample at(double t) const {
    if (!covers(t))
      throw HorizonExceeded("environment trace does not cover t=" +
                            std::to_string(t));
    auto hi = std::lower_bound(
        samples_.begin(), samples_.end(), t,
        [](const EnvironmentSample &s, double v) { return s.t < v; });
    if (hi->t == t)
      return *hi;
    auto lo = hi - 1;
    const double f = (t - lo->t) / (hi->t - lo->t);
    auto mix = [f](double a, double b) { return a + f * (b - a); };
    return {t, mix(lo->rainfall, hi->rainfall),
            mix(lo->discharge, hi->discharge), mix(lo->level, hi->level)};
  }

private:
  std::vector<EnvironmentSample> samples_;
};

struct ScriptedTrigger {
  double t = 0.0;
  TriggerKind kind = TriggerKind::Query;
  int zone = 0;
};

struct ScriptedFailure {
  int node = 0;
  double t = 0.0;
};

struct EventWatchConfig {
  std::int64_t period_s = 60;
  double delta = 0.5; // metres of change within one period
};

inline constexpr std::uint64_t kDefaultSeed = 20120101;

struct Scenario {
  std::uint64_t seed = kDefaultSeed;
  double horizon = 720.0;
  double heartbeat_period = 10.0;
  int missed_heartbeats = 3;
  std::int64_t sample_s = 2;
  std::int64_t transmit_s = 1;
  double sensor_noise = 0.0;
  PredictorConfig predictor;
  ChannelModel channel;
  EventWatchConfig event_watch;
  std::vector<NodeSpec> nodes;
  std::map<int, EnvironmentTrace> environment;
  std::map<int, std::vector<Reading>> calibration;
  std::vector<ScriptedTrigger> triggers;
  std::vector<ScriptedFailure> failures;
};

inline std::int64_t to_ticks(double minutes) {
  return static_cast<std::int64_t>(std::llround(minutes * 60.0));
}

inline double to_minutes(std::int64_t ticks) {
  return static_cast<double>(ticks) / 60.0;
}

} // namespace floodcast::simnet
