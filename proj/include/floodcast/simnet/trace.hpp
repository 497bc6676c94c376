#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "floodcast/format.hpp"
#include "floodcast/predictor.hpp"
#include "floodcast/simnet/scenario.hpp"

namespace floodcast::simnet {

struct SimEvent {
  std::int64_t tick = 0; // seconds
  int node = 0;
  std::uint64_t seq = 0;
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  double t() const { return to_minutes(tick); }

  std::optional<std::string> field(const std::string &key) const {
    for (const auto &[k, v] : fields)
      if (k == key)
        return v;
    return std::nullopt;
  }
};

struct EnergyPoint {
  std::int64_t tick = 0;
  double millijoules = 0.0;
};

struct NodePrediction {
  int node = 0;
  int zone = 0;
  std::int64_t tick = 0;
  std::uint64_t message = 0; // message that carried the reading
  Reading reading;
  PredictionOutput output;
};

struct AlarmRecord {
  std::int64_t tick = 0;
  int zone = 0;
  int source = 0; // node whose prediction raised the alarm
  double reading_t = 0.0;
  double predicted_flood_in = 0.0;
};

struct FailureFlag {
  int node = 0;
  double t = 0.0;

  friend bool operator==(const FailureFlag &, const FailureFlag &) = default;
};

struct MessageStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
};

struct SimTrace {
  std::vector<SimEvent> events;
  std::map<int, std::vector<EnergyPoint>> energy;
  std::vector<NodePrediction> predictions;
  std::vector<AlarmRecord> alarms;
  std::vector<FailureFlag> failures;
  MessageStats messages;

  double final_energy(int node) const {
    auto it = energy.find(node);
    return it == energy.end() || it->second.empty()
               ? 0.0
               : it->second.back().millijoules;
  }
};

/// One event per line: fixed leading fields, then the event's own fields in
/// the order they were recorded.
inline void write_event(std::ostream &os, const SimEvent &e) {
  os << "t=" << format_number(e.t()) << " node=" << e.node
     << " seq=" << e.seq << " kind=" << e.kind;
  for (const auto &[k, v] : e.fields)
    os << ' ' << k << '=' << v;
  os << '\n';
}

inline void write_trace(std::ostream &os, const SimTrace &trace) {
  for (const auto &e : trace.events)
    write_event(os, e);
}

inline std::string serialize(const SimTrace &trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

} // namespace floodcast::simnet
