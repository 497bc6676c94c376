#pragma once

// Quadratic trend of the rising water level and flood-line crossing search.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "floodcast/error.hpp"
#include "floodcast/linalg.hpp"

namespace floodcast {

struct LevelSample {
  double t = 0.0;     // minutes
  double level = 0.0; // metres
};

/// Ordered water-level samples with strictly increasing time.
class LevelSeries {
public:
  LevelSeries() = default;
  explicit LevelSeries(std::vector<LevelSample> samples)
      : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto &s = samples_[i];
      if (!std::isfinite(s.t) || !std::isfinite(s.level) || s.level < 0.0)
        throw InvalidInput("level sample " + std::to_string(i) +
                           " must be finite with level >= 0");
      if (i > 0 && !(s.t > samples_[i - 1].t))
        throw InvalidInput("level series times must strictly increase");
    }
  }

  void push_back(LevelSample s) {
    if (!samples_.empty() && !(s.t > samples_.back().t))
      throw InvalidInput("level series times must strictly increase");
    if (!std::isfinite(s.level) || s.level < 0.0)
      throw InvalidInput("level must be finite and >= 0");
    samples_.push_back(s);
  }

  /// Drops the oldest samples so at most `keep` remain.
  void retain_last(std::size_t keep) {
    if (samples_.size() > keep)
      samples_.erase(samples_.begin(),
                     samples_.begin() +
                         static_cast<std::ptrdiff_t>(samples_.size() - keep));
  }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const LevelSample &operator[](std::size_t i) const { return samples_[i]; }
  const LevelSample &back() const { return samples_.back(); }
  const std::vector<LevelSample> &samples() const { return samples_; }

private:
  std::vector<LevelSample> samples_;
};

/// level(x) = a1 x^2 + a2 x + a3 with x in minutes since origin_time.
struct QuadraticModel {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double origin_time = 0.0;
  double last_x = 0.0; // x of the most recent fitted sample
  double reliability_period = 1.0;

  double operator()(double x) const { return (a1 * x + a2) * x + a3; }
};

/// Suffix of the series from the most recent local minimum, or nullopt when
/// the latest step does not rise. Plateaus extend back to their first sample.
inline std::optional<LevelSeries> detect_rising_segment(
    const LevelSeries &series) {
  const std::size_t n = series.size();
  if (n < 2 || !(series[n - 1].level > series[n - 2].level))
    return std::nullopt;
  std::size_t start = n - 1;
  while (start > 0 && series[start - 1].level <= series[start].level)
    --start;
  return LevelSeries(std::vector<LevelSample>(
      series.samples().begin() + static_cast<std::ptrdiff_t>(start),
      series.samples().end()));
}

/// Least-squares quadratic through the segment via the Vandermonde normal
/// equations. Two samples give a line (a1 = 0); one gives a constant.
inline QuadraticModel quadratic_fit(const LevelSeries &segment,
                                    double reliability_period) {
  if (segment.empty())
    throw InvalidInput("quadratic fit needs at least one sample");
  if (!(reliability_period > 0.0))
    throw InvalidInput("reliability period must be positive");

  QuadraticModel model;
  model.origin_time = segment[0].t;
  model.reliability_period = reliability_period;
  const std::size_t n = segment.size();
  model.last_x = segment.back().t - model.origin_time;

  if (n == 1) {
    model.a3 = segment[0].level;
    return model;
  }
  if (n == 2) {
    const double dx = model.last_x;
    model.a2 = (segment[1].level - segment[0].level) / dx;
    model.a3 = segment[0].level;
    return model;
  }

  // Columns are x^2, x, 1 with x rescaled to [0, 1]; the scale is undone
  // afterwards.
  const double span = model.last_x;
  linalg::Matrix gram(3, 3);
  std::vector<double> rhs(3, 0.0);
  for (const auto &s : segment.samples()) {
    const double x = (s.t - model.origin_time) / span;
    const double row[3] = {x * x, x, 1.0};
    for (int a = 0; a < 3; ++a) {
      rhs[a] += row[a] * s.level;
      for (int b = 0; b < 3; ++b)
        gram(a, b) += row[a] * row[b];
    }
  }
  const auto f = linalg::Cholesky::factor(gram);
  if (!f)
    throw SingularSystem("Vandermonde normal equations are rank deficient");
  const std::vector<double> c = linalg::solve_refined(gram, *f, rhs);
  model.a1 = c[0] / (span * span);
  model.a2 = c[1] / span;
  model.a3 = c[2];
  return model;
}

inline constexpr double kLinearDegeneracy = 1e-12;

/// Minutes from the last fitted sample until the model first reaches
/// `flood_line`, if that happens within the reliability period. Returns 0
/// when the model is already at or above the line at the last sample.
inline std::optional<double> predict_crossing(const QuadraticModel &model,
                                              double flood_line) {
  if (!(flood_line > 0.0))
    throw InvalidInput("flood line must be positive");
  const double x0 = model.last_x;
  const double horizon = x0 + model.reliability_period;
  const double a = model.a1;
  const double b = model.a2;
  const double c = model.a3 - flood_line;
  auto g = [&](double x) { return (a * x + b) * x + c; };

  if (g(x0) >= 0.0)
    return 0.0;

  std::optional<double> root;
  if (std::abs(a) < kLinearDegeneracy) {
    if (b > 0.0)
      root = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
      double r1 = q / a;
      double r2 = q != 0.0 ? c / q : r1;
      if (r1 > r2)
        std::swap(r1, r2);
      // g(x0) < 0: an upward parabola has x0 between its roots, so it next
      // reaches the line at r2; a downward one does so at r1 if r1 > x0.
      if (a > 0.0)
        root = r2;
      else if (r1 > x0)
        root = r1;
    }
  }
  if (!root || !(*root > x0) || *root > horizon)
    return std::nullopt;
  return *root - x0;
}

} // namespace floodcast
