#pragma once

#include <string>

#include "floodcast/error.hpp"
#include "floodcast/simnet/scenario.hpp"

namespace floodcast::simnet {

enum class PowerState { Idle, Awake, Transmitting, Down };

inline std::string to_string(PowerState s) {
  switch (s) {
  case PowerState::Idle:
    return "idle";
  case PowerState::Awake:
    return "awake";
  case PowerState::Transmitting:
    return "transmitting";
  case PowerState::Down:
    return "down";
  }
  return "unknown";
}

struct ComponentMask {
  bool sensing = false;
  bool transmit = false;
  bool receive = false;
  bool sleep = false;
};

/// Components drawing power for a node kind in a given state. Idle sensors
/// keep only the receiver on; event watchers always keep sensing on and
/// transmit only in bursts; infrastructure nodes never sense.
inline ComponentMask components(NodeKind kind, PowerState state) {
  if (state == PowerState::Down)
    return {false, false, false, true};
  const bool busy = state != PowerState::Idle;
  switch (kind) {
  case NodeKind::Sensor:
    return {state == PowerState::Awake, busy, true, false};
  case NodeKind::EventWatch:
    return {true, busy, true, false};
  case NodeKind::Computational:
  case NodeKind::Intermediate:
  case NodeKind::Office:
    return {false, busy, true, false};
  }
  return {};
}

inline double draw_mw(const PowerProfile &p, ComponentMask m) {
  return (m.sensing ? p.sensing : 0.0) + (m.transmit ? p.transmit : 0.0) +
         (m.receive ? p.receive : 0.0) + (m.sleep ? p.sleep : 0.0);
}

/// Energy in millijoules spent by `node` holding `state` for `duration_s`.
inline double power_step(const NodeSpec &node, PowerState state,
                         double duration_s) {
  if (!(duration_s >= 0.0))
    throw InvalidInput("power step duration must be non-negative");
  return duration_s * draw_mw(node.power, components(node.kind, state));
}

} // namespace floodcast::simnet
