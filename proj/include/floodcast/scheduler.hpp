#pragma once

// Sampling-interval selection: the time multiplier, time-set recalibration
// and trigger handling. Everything runs on simulated minutes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "floodcast/error.hpp"

namespace floodcast {

/// Admissible sampling intervals (minutes, ascending) sharing one integer
/// divisor, plus the action time T: the lead needed to disseminate an alarm
/// and act on it. T floors every interval handed out.
struct TimeSet {
  std::vector<double> intervals{5.0, 15.0, 30.0, 60.0};
  int divisor = 1;
  double action_time = 5.0;
  /// Consecutive readings in the calmest band; two reset the divisor.
  int calm_streak = 0;

  void validate() const {
    if (intervals.empty())
      throw InvalidInput("time set must not be empty");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (!(intervals[i] > 0.0) || !std::isfinite(intervals[i]))
        throw InvalidInput("time set intervals must be positive");
      if (i > 0 && !(intervals[i] > intervals[i - 1]))
        throw InvalidInput("time set intervals must strictly ascend");
    }
    if (divisor < 1)
      throw InvalidInput("time set divisor must be >= 1");
    if (!(action_time > 0.0))
      throw InvalidInput("action time must be positive");
  }

  std::size_t size() const { return intervals.size(); }

  double effective(std::size_t i) const {
    return intervals[i] / static_cast<double>(divisor);
  }

  /// Past this divisor every effective interval is already below T.
  int max_divisor() const {
    return std::max(1, static_cast<int>(
                           std::ceil(intervals.back() / action_time)));
  }
};

inline double urgency(double prev_level, double curr_level,
                      double flood_line) {
  const double rise = std::max(0.0, curr_level - prev_level);
  return std::max(curr_level, rise) / flood_line;
}

/// Index into the time set for an urgency value; 0 is the shortest interval.
inline std::size_t band_index(double urgency_value, std::size_t bands) {
  const double u = std::clamp(urgency_value, 0.0, 1.0);
  const double raw = std::floor((1.0 - u) * static_cast<double>(bands));
  return std::min(static_cast<std::size_t>(raw), bands - 1);
}

/// Interval until the next reading, driven by the current level and the
/// latest rise relative to the flood line.
inline double time_multiplier(double prev_level, double curr_level,
                              double flood_line, const TimeSet &ts) {
  if (!(flood_line > 0.0))
    throw InvalidInput("flood line must be positive");
  const std::size_t i =
      band_index(urgency(prev_level, curr_level, flood_line), ts.size());
  return std::max(ts.effective(i), ts.action_time);
}

/// Tracks calm readings; the divisor relaxes to 1 after two consecutive
/// readings in the calmest band.
inline TimeSet observe_urgency(TimeSet ts, double urgency_value) {
  if (band_index(urgency_value, ts.size()) == ts.size() - 1) {
    if (++ts.calm_streak >= 2) {
      ts.divisor = 1;
      ts.calm_streak = 0;
    }
  } else {
    ts.calm_streak = 0;
  }
  return ts;
}

struct Recalibration {
  TimeSet time_set;
  double interval = 0.0;
  bool alarm = false;
};

/// Shortens the sampling interval below a predicted flood time by raising
/// the shared divisor, never going below T. Alarms when the flood is
/// predicted sooner than T.
inline Recalibration recalibrate(const TimeSet &ts,
                                 std::optional<double> predicted_flood_in,
                                 double chosen_interval) {
  Recalibration out{ts, chosen_interval, false};
  if (!predicted_flood_in)
    return out;
  const double flood_in = *predicted_flood_in;
  const double t_action = ts.action_time;
  out.alarm = flood_in < t_action;
  if (flood_in > chosen_interval)
    return out;

  const int cap = std::max(ts.max_divisor(), ts.divisor);
  if (flood_in <= t_action) {
    const int needed = static_cast<int>(
        std::ceil(ts.intervals.front() / t_action));
    out.time_set.divisor = std::clamp(needed, ts.divisor, cap);
    out.interval = t_action;
    return out;
  }

  const double base = chosen_interval * static_cast<double>(ts.divisor);
  int d = static_cast<int>(std::floor(base / flood_in)) + 1;
  while (!(base / static_cast<double>(d) < flood_in))
    ++d;
  out.time_set.divisor = std::max(d, ts.divisor);
  out.interval = std::max(base / static_cast<double>(out.time_set.divisor),
                          t_action);
  return out;
}

enum class TriggerKind { Time, Event, Query, SystemInterrupt };

inline std::string to_string(TriggerKind k) {
  switch (k) {
  case TriggerKind::Time:
    return "time";
  case TriggerKind::Event:
    return "event";
  case TriggerKind::Query:
    return "query";
  case TriggerKind::SystemInterrupt:
    return "system_interrupt";
  }
  return "unknown";
}

struct Trigger {
  TriggerKind kind = TriggerKind::Time;
  double issued_at = 0.0; // minutes
  int origin = 0;
};

/// Triggers ordered by issue time, ties broken by origin id.
class TriggerQueue {
public:
  void push(Trigger t) { heap_.push(t); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Trigger &top() const { return heap_.top(); }

  /// Pops the earliest trigger issued at or before `until`.
  std::optional<Trigger> pop_due(double until) {
    if (heap_.empty() || heap_.top().issued_at > until)
      return std::nullopt;
    Trigger t = heap_.top();
    heap_.pop();
    return t;
  }

private:
  struct Later {
    bool operator()(const Trigger &a, const Trigger &b) const {
      if (a.issued_at != b.issued_at)
        return a.issued_at > b.issued_at;
      return a.origin > b.origin;
    }
  };
  std::priority_queue<Trigger, std::vector<Trigger>, Later> heap_;
};

struct WakeAction {
  enum class Kind { SampleNow, WaitUntil };
  Kind kind = Kind::WaitUntil;
  double at = 0.0;
};

/// External and system interrupts cut the wait short; otherwise sleep for
/// the interval.
inline WakeAction next_wakeup(const TimeSet &ts, double now, double interval,
                              const std::optional<Trigger> &pending) {
  if (!(interval > 0.0))
    throw InvalidInput("wait interval must be positive");
  if (pending && pending->kind != TriggerKind::Time)
    return {WakeAction::Kind::SampleNow, now};
  return {WakeAction::Kind::WaitUntil,
          now + std::max(interval, ts.action_time)};
}

} // namespace floodcast
