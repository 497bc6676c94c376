#pragma once

// The per-node prediction state machine: robust regression of water level on
// its drivers, merged with the consolidated model from earlier storage
// blocks; quadratic extrapolation of a rising level toward the flood line;
// and adaptive choice of the next sampling instant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floodcast/error.hpp"
#include "floodcast/reading.hpp"
#include "floodcast/regression.hpp"
#include "floodcast/scheduler.hpp"
#include "floodcast/trend.hpp"

namespace floodcast {

struct WrmsResult {
  double wrms = 0.0;
  WeightVector weights;
};

/// Weighted RMS of prediction errors with bisquare weights on the excess of
/// each |e_i| over the median |e|. The weights double as per-reading
/// reliability scores.
inline WrmsResult weighted_rms_error(std::span<const double> errors,
                                     double tuning_constant = 4.685,
                                     double mad_scale = 0.6745) {
  if (errors.empty())
    throw InvalidInput("weighted RMS needs at least one error");
  std::vector<double> mag;
  mag.reserve(errors.size());
  for (double e : errors) {
    if (!std::isfinite(e))
      throw NonFinite("non-finite error value");
    mag.push_back(std::abs(e));
  }
  const double centre = median(mag);
  const double s = mad(mag) / mad_scale;
  const double floor = 1e-12 * (1.0 + centre);

  WrmsResult out;
  out.weights.resize(mag.size());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double excess = std::max(0.0, mag[i] - centre);
    if (excess == 0.0)
      out.weights[i] = 1.0;
    else if (s < floor)
      out.weights[i] = excess <= floor ? 1.0 : 0.0;
    else
      out.weights[i] = bisquare(excess / (tuning_constant * s));
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    num += out.weights[i] * mag[i] * mag[i];
    den += out.weights[i];
  }
  out.wrms = std::sqrt(num / den);
  return out;
}

inline double rms(std::span<const double> errors) {
  if (errors.empty())
    throw InvalidInput("RMS needs at least one error");
  double s = 0.0;
  for (double e : errors)
    s += e * e;
  return std::sqrt(s / static_cast<double>(errors.size()));
}

struct PredictorConfig {
  double flood_line = 25.0;
  double threshold = 20.0;
  /// Trend extrapolation horizon in minutes; unset means four times the
  /// interval chosen by the time multiplier.
  std::optional<double> reliability_period;
  std::size_t capacity = 10;
  TimeSet time_set;
  RobustFitConfig robust;
  /// Readings whose error weight falls below this are dropped before a
  /// consolidation refit.
  double purge_weight = 0.05;

  void validate() const {
    if (!(flood_line > 0.0))
      throw InvalidInput("flood line must be positive");
    if (!(threshold > 0.0 && threshold < flood_line))
      throw InvalidInput("threshold must lie strictly between 0 and the "
                         "flood line");
    if (reliability_period && !(*reliability_period > 0.0))
      throw InvalidInput("reliability period must be positive");
    if (capacity < 1)
      throw InvalidInput("storage capacity must be positive");
    time_set.validate();
    robust.validate();
  }
};

/// P is refit from the stored rows each step; S is the consolidated model of
/// all earlier storage blocks, carrying weight W.
struct CoefficientState {
  Coefficients current;      // P; empty until enough rows exist
  std::size_t counter = 1;
  Coefficients stored;       // S; empty until the first consolidation
  double stored_weight = 0.0; // W
  std::size_t capacity = 10; // SC
};

struct PredictionOutput {
  double t = 0.0;
  double measured_level = 0.0;
  std::optional<double> predicted_level; // unset while calibrating
  bool calibrating = false;
  bool flood_predicted = false;
  std::optional<double> predicted_flood_in; // minutes
  bool alarm = false;
  bool threshold_crossed = false;
  double next_interval = 0.0;
  Coefficients model_coefficients;
};

class Predictor {
public:
  explicit Predictor(PredictorConfig config)
      : config_(std::move(config)), time_set_(config_.time_set) {
    config_.validate();
    state_.capacity = config_.capacity;
  }

  const PredictorConfig &config() const { return config_; }
  const CoefficientState &state() const { return state_; }
  const TimeSet &time_set() const { return time_set_; }
  const LevelSeries &level_table() const { return levels_; }
  std::size_t history_rows() const { return rows_.size(); }
  std::size_t parameter_count() const { return parameter_count_; }

  /// Every |predicted - measured| recorded so far, in reading order.
  const std::vector<double> &recorded_errors() const { return errors_; }

  /// Model used for prediction: merge(P, counter, S, W). Empty while no
  /// model exists.
  Coefficients merged_model() const {
    const double wp = state_.current.empty()
                          ? 0.0
                          : static_cast<double>(state_.counter);
    if (wp == 0.0 && state_.stored_weight == 0.0)
      return {};
    if (state_.stored.empty())
      return state_.current;
    const Coefficients &p =
        state_.current.empty() ? state_.stored : state_.current;
    return merge_coefficients(p, wp, state_.stored, state_.stored_weight)
        .coefficients;
  }

  /// Loads past data tables without predicting, applying the same storage
  /// and consolidation rules as step().
  void prime(std::span<const Reading> history) {
    for (const Reading &r : history) {
      check_reading(r);
      push_level(r);
      append(r, std::nullopt);
    }
    refit_current();
  }

  /// Predicts for one reading and folds it into the tables. On any
  /// exception the predictor is left exactly as it was.
  PredictionOutput step(const Reading &reading) {
    Predictor snapshot = *this;
    try {
      return step_impl(reading);
    } catch (...) {
      *this = std::move(snapshot);
      throw;
    }
  }

  /// Folds the full storage block into S and clears the tables.
  void consolidate() {
    if (state_.counter != state_.capacity || rows_.size() != state_.capacity)
      throw InvalidInput("consolidation requires a full storage block");

    std::vector<Row> kept = rows_;
    std::vector<double> errs;
    for (const Row &r : rows_)
      if (r.error)
        errs.push_back(*r.error);
    if (!errs.empty()) {
      const WrmsResult scored =
          weighted_rms_error(errs, config_.robust.tuning_constant,
                             config_.robust.mad_scale);
      std::vector<Row> filtered;
      std::size_t k = 0;
      for (const Row &r : rows_) {
        const bool drop = r.error && scored.weights[k] < config_.purge_weight;
        if (r.error)
          ++k;
        if (!drop)
          filtered.push_back(r);
      }
      if (filtered.size() >= minimum_rows())
        kept = std::move(filtered);
    }

    const Coefficients block = fit(kept);
    const double sc = static_cast<double>(state_.capacity);
    state_.stored =
        merge_coefficients(block, sc, state_.stored.empty() ? block
                                                            : state_.stored,
                           state_.stored_weight)
            .coefficients;
    state_.stored_weight += sc;
    state_.current.clear();
    rows_.clear();
    state_.counter = 1;
  }

private:
  PredictionOutput step_impl(const Reading &reading) {
    check_reading(reading);

    PredictionOutput out;
    out.t = reading.t;
    out.measured_level = reading.level;

    refit_current();
    out.model_coefficients = merged_model();
    std::optional<double> error;
    if (out.model_coefficients.empty()) {
      out.calibrating = true;
    } else {
      const std::vector<double> params = reading.parameters();
      double yhat = out.model_coefficients[0];
      for (std::size_t j = 0; j < params.size(); ++j)
        yhat += out.model_coefficients[j + 1] * params[j];
      out.predicted_level = yhat;
      error = std::abs(yhat - reading.level);
      errors_.push_back(*error);
    }

    const double prev_level =
        levels_.empty() ? reading.level : levels_.back().level;
    out.threshold_crossed =
        prev_level < config_.threshold && reading.level >= config_.threshold;
    push_level(reading);

    const double u = urgency(prev_level, reading.level, config_.flood_line);
    time_set_ = observe_urgency(time_set_, u);
    const double chosen = time_multiplier(prev_level, reading.level,
                                          config_.flood_line, time_set_);

    if (auto segment = detect_rising_segment(levels_)) {
      const double horizon = config_.reliability_period.value_or(4.0 * chosen);
      const QuadraticModel model = quadratic_fit(*segment, horizon);
      out.predicted_flood_in = predict_crossing(model, config_.flood_line);
    }
    out.flood_predicted = out.predicted_flood_in.has_value();

    const Recalibration rec =
        recalibrate(time_set_, out.predicted_flood_in, chosen);
    time_set_ = rec.time_set;
    out.next_interval = rec.interval;
    out.alarm = rec.alarm;

    append(reading, error);
    return out;
  }

  struct Row {
    std::vector<double> params;
    double level = 0.0;
    std::optional<double> error;
  };

  std::size_t minimum_rows() const { return parameter_count_ + 2; }

  void check_reading(const Reading &r) {
    if (r.corrupted)
      throw CorruptedReading();
    if (!r.finite())
      throw NonFinite("reading at t=" + std::to_string(r.t) +
                      " has non-finite fields");
    const std::size_t m = 2 + r.extras.size();
    if (parameter_count_ == 0) {
      parameter_count_ = m;
      if (config_.capacity < minimum_rows())
        throw InvalidInput("storage capacity " +
                           std::to_string(config_.capacity) +
                           " cannot hold the " +
                           std::to_string(minimum_rows()) +
                           " rows a fit needs");
    } else if (m != parameter_count_) {
      throw DimensionMismatch("reading carries " + std::to_string(m) +
                              " parameters, expected " +
                              std::to_string(parameter_count_));
    }
  }

  void push_level(const Reading &r) {
    levels_.push_back({r.t, r.level});
    levels_.retain_last(2 * config_.capacity);
  }

  void append(const Reading &r, std::optional<double> error) {
    rows_.push_back({r.parameters(), r.level, error});
    if (state_.counter == state_.capacity)
      consolidate();
    else
      ++state_.counter;
  }

  Coefficients fit(const std::vector<Row> &rows) const {
    std::vector<std::vector<double>> params;
    std::vector<double> y;
    params.reserve(rows.size());
    for (const Row &r : rows) {
      params.push_back(r.params);
      y.push_back(r.level);
    }
    return robust_fit(DesignMatrix::from_parameters(params), y,
                      config_.robust)
        .coefficients;
  }

  void refit_current() {
    if (rows_.size() < minimum_rows() || parameter_count_ == 0) {
      state_.current.clear();
      return;
    }
    state_.current = fit(rows_);
  }

  PredictorConfig config_;
  TimeSet time_set_;
  CoefficientState state_;
  std::vector<Row> rows_;
  LevelSeries levels_;
  std::vector<double> errors_;
  std::size_t parameter_count_ = 0;
};

/// One entry of a predictor run's output stream.
struct RunRecord {
  enum class Kind { Prediction, Resample, Trigger, Diagnostic };
  Kind kind = Kind::Prediction;
  double t = 0.0;
  std::optional<PredictionOutput> output;
  std::optional<Trigger> trigger;
  std::string detail;
};

/// Yields the reading for a requested time, or nullopt when exhausted.
using ReadingSource = std::function<std::optional<Reading>(double)>;

inline constexpr int kMaxResamples = 8;

/// Sample, predict, wait for the next interval unless an interrupt arrives
/// first, repeat until the source runs dry.
inline std::vector<RunRecord> run(Predictor &predictor,
                                  const ReadingSource &source,
                                  TriggerQueue &triggers,
                                  double start_time = 0.0) {
  std::vector<RunRecord> records;
  double now = start_time;
  int resamples = 0;
  for (;;) {
    std::optional<Reading> reading;
    try {
      reading = source(now);
    } catch (const std::exception &e) {
      records.push_back({RunRecord::Kind::Diagnostic, now, std::nullopt,
                         std::nullopt, e.what()});
      break;
    }
    if (!reading)
      break;

    PredictionOutput out;
    try {
      out = predictor.step(*reading);
    } catch (const CorruptedReading &) {
      records.push_back({RunRecord::Kind::Resample, reading->t, std::nullopt,
                         Trigger{TriggerKind::SystemInterrupt, reading->t, 0},
                         "corrupted payload"});
      if (++resamples > kMaxResamples) {
        records.push_back({RunRecord::Kind::Diagnostic, reading->t,
                           std::nullopt, std::nullopt,
                           "resample limit reached"});
        break;
      }
      continue;
    } catch (const SingularSystem &e) {
      records.push_back({RunRecord::Kind::Resample, reading->t, std::nullopt,
                         Trigger{TriggerKind::SystemInterrupt, reading->t, 0},
                         e.what()});
      if (++resamples > kMaxResamples) {
        records.push_back({RunRecord::Kind::Diagnostic, reading->t,
                           std::nullopt, std::nullopt,
                           "resample limit reached"});
        break;
      }
      continue;
    } catch (const std::exception &e) {
      records.push_back({RunRecord::Kind::Diagnostic, reading->t,
                         std::nullopt, std::nullopt, e.what()});
      break;
    }
    resamples = 0;
    now = reading->t;
    records.push_back({RunRecord::Kind::Prediction, now, out, std::nullopt,
                       {}});

    const TimeSet &ts = predictor.time_set();
    if (out.threshold_crossed)
      triggers.push({TriggerKind::Event, now + ts.action_time, 0});

    // Interrupts raised up to now are answered by the reading just taken.
    while (triggers.pop_due(now)) {
    }
    const WakeAction wait = next_wakeup(ts, now, out.next_interval, {});
    std::optional<Trigger> pending;
    while (auto t = triggers.pop_due(wait.at)) {
      if (t->kind != TriggerKind::Time) {
        pending = t;
        break;
      }
    }
    const WakeAction action = next_wakeup(ts, now, out.next_interval, pending);
    if (action.kind == WakeAction::Kind::SampleNow) {
      records.push_back({RunRecord::Kind::Trigger, pending->issued_at,
                         std::nullopt, pending, to_string(pending->kind)});
      now = pending->issued_at;
    } else {
      now = action.at;
    }
  }
  return records;
}

} // namespace floodcast
