#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace floodcast {

struct NamedValue {
  std::string name;
  double value = 0.0;

  friend bool operator==(const NamedValue &, const NamedValue &) = default;
};

/// One timestamped sample: the water level plus the parameters it is
/// regressed on.
struct Reading {
  double t = 0.0;            // minutes
  double level = 0.0;        // metres
  double rainfall = 0.0;     // mm/hr
  double discharge = 0.0;    // m^3/s
  std::vector<NamedValue> extras;
  bool corrupted = false;

  /// Regression parameters in column order: rainfall, discharge, extras.
  std::vector<double> parameters() const {
    std::vector<double> p{rainfall, discharge};
    for (const auto &x : extras)
      p.push_back(x.value);
    return p;
  }

  bool finite() const {
    if (!std::isfinite(t) || !std::isfinite(level) ||
        !std::isfinite(rainfall) || !std::isfinite(discharge))
      return false;
    for (const auto &x : extras)
      if (!std::isfinite(x.value))
        return false;
    return true;
  }

  friend bool operator==(const Reading &, const Reading &) = default;
};

} // namespace floodcast
