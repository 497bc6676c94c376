#pragma once

// Weighted and robust multivariate linear regression.
//
// The model is y = a_1 + a_2 x_1 + ... + a_{m+1} x_m. Observations are
// weighted twice over: equation weights derived from each response's
// squared deviation from the response mean seed the fit, then iteratively
// reweighted least squares (IRLS) with leverage-adjusted residuals, a MAD
// scale estimate and a bisquare or Andrews weight function refines it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "floodcast/error.hpp"
#include "floodcast/linalg.hpp"

namespace floodcast {

using Coefficients = std::vector<double>;
using WeightVector = std::vector<double>;

enum class WeightFunction { Bisquare, Andrews };

inline std::string to_string(WeightFunction fn) {
  return fn == WeightFunction::Bisquare ? "bisquare" : "andrews";
}

/// Regression design: first column all ones, column j+1 holds parameter x_j.
class DesignMatrix {
public:
  /// Builds the design from per-observation parameter rows (without the
  /// intercept column). Every row must have the same, non-zero length.
  static DesignMatrix from_parameters(
      const std::vector<std::vector<double>> &params) {
    if (params.empty())
      throw InvalidInput("design matrix needs at least one row");
    const std::size_t m = params.front().size();
    if (m == 0)
      throw InvalidInput("design matrix needs at least one parameter");
    DesignMatrix d;
    d.values_ = linalg::Matrix(params.size(), m + 1);
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].size() != m)
        throw DimensionMismatch("parameter row " + std::to_string(i) +
                                " has " + std::to_string(params[i].size()) +
                                " values, expected " + std::to_string(m));
      d.values_(i, 0) = 1.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (!std::isfinite(params[i][j]))
          throw NonFinite("non-finite design entry at row " +
                          std::to_string(i));
        d.values_(i, j + 1) = params[i][j];
      }
    }
    return d;
  }

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }
  double operator()(std::size_t r, std::size_t c) const {
    return values_(r, c);
  }
  std::span<const double> row(std::size_t r) const { return values_.row(r); }

  double predict(std::size_t r, std::span<const double> a) const {
    double s = 0.0;
    for (std::size_t j = 0; j < cols(); ++j)
      s += values_(r, j) * a[j];
    return s;
  }

  /// X^T W X for a diagonal weight matrix.
  linalg::Matrix gram(std::span<const double> w) const {
    const std::size_t p = cols();
    linalg::Matrix g(p, p);
    for (std::size_t i = 0; i < rows(); ++i) {
      if (w[i] == 0.0)
        continue;
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b <= a; ++b)
          g(a, b) += w[i] * values_(i, a) * values_(i, b);
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < a; ++b)
        g(b, a) = g(a, b);
    return g;
  }

  /// X^T W y.
  std::vector<double> moment(std::span<const double> y,
                             std::span<const double> w) const {
    std::vector<double> out(cols(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j)
        out[j] += w[i] * values_(i, j) * y[i];
    return out;
  }

private:
  linalg::Matrix values_;
};

/// Solves (X^T W X) A = X^T W Y.
inline Coefficients weighted_least_squares(const DesignMatrix &x,
                                           std::span<const double> y,
                                           std::span<const double> w) {
  if (y.size() != x.rows() || w.size() != x.rows())
    throw DimensionMismatch("design has " + std::to_string(x.rows()) +
                            " rows but response has " +
                            std::to_string(y.size()) + " and weights " +
                            std::to_string(w.size()));
  std::size_t positive = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0)
      throw InvalidInput("weights must be finite and non-negative");
    if (!std::isfinite(y[i]))
      throw NonFinite("non-finite response at row " + std::to_string(i));
    positive += w[i] > 0.0;
  }
  if (positive < x.cols())
    throw SingularSystem(std::to_string(positive) +
                         " positive weights cannot determine " +
                         std::to_string(x.cols()) + " coefficients");

  linalg::Matrix gram = x.gram(w);
  const linalg::Cholesky f = linalg::factor_with_ridge(gram);
  return linalg::solve_refined(gram, f, x.moment(y, w));
}

inline double median(std::vector<double> v) {
  if (v.empty())
    throw InvalidInput("median of an empty vector");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1)
    return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

/// Median absolute deviation about the median.
inline double mad(std::span<const double> values) {
  const double centre = median({values.begin(), values.end()});
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values)
    dev.push_back(std::abs(v - centre));
  return median(std::move(dev));
}

inline double bisquare(double u) {
  const double a = std::abs(u);
  if (a >= 1.0)
    return 0.0;
  const double t = 1.0 - a * a;
  return t * t;
}

/// Andrews wave weight on the unit support shared with the bisquare.
inline double andrews(double u) {
  const double a = std::abs(u);
  if (a >= 1.0)
    return 0.0;
  if (a == 0.0)
    return 1.0;
  const double x = std::numbers::pi * a;
  return std::max(0.0, std::sin(x) / x);
}

inline double apply_weight(WeightFunction fn, double u) {
  return fn == WeightFunction::Bisquare ? bisquare(u) : andrews(u);
}

inline WeightVector robust_weights(std::span<const double> u,
                                   WeightFunction fn) {
  WeightVector w;
  w.reserve(u.size());
  for (double v : u) {
    if (!std::isfinite(v))
      throw NonFinite("non-finite standardized residual");
    w.push_back(apply_weight(fn, v));
  }
  return w;
}

/// Poly-square equation weights: squared deviations from the response mean,
/// normalized by their maximum, passed through the weight function.
inline WeightVector equation_weights(std::span<const double> y,
                                     WeightFunction fn) {
  if (y.empty())
    throw InvalidInput("equation weights need at least one response");
  double mean = 0.0;
  for (double v : y)
    mean += v;
  mean /= static_cast<double>(y.size());

  std::vector<double> d;
  d.reserve(y.size());
  double max_d = 0.0;
  for (double v : y) {
    d.push_back((v - mean) * (v - mean));
    max_d = std::max(max_d, d.back());
  }
  WeightVector w(y.size(), 1.0);
  if (max_d == 0.0)
    return w;
  bool any = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    w[i] = apply_weight(fn, d[i] / max_d);
    any = any || w[i] > 0.0;
  }
  if (!any)
    std::fill(w.begin(), w.end(), 1.0);
  return w;
}

/// Unclamped diagonal of the hat matrix X (X^T X)^{-1} X^T.
inline std::vector<double> hat_diagonal(const DesignMatrix &x) {
  linalg::Matrix gram = x.gram(std::vector<double>(x.rows(), 1.0));
  const linalg::Cholesky f = linalg::factor_with_ridge(gram);
  std::vector<double> h(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    const std::vector<double> z = f.solve(xi);
    double s = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j)
      s += xi[j] * z[j];
    h[i] = s;
  }
  return h;
}

inline constexpr double kLeverageEpsilon = 1e-8;

/// Hat-matrix diagonal clamped into [0, 1 - 1e-8].
inline std::vector<double> leverage(const DesignMatrix &x) {
  std::vector<double> h = hat_diagonal(x);
  for (double &v : h)
    v = std::clamp(v, 0.0, 1.0 - kLeverageEpsilon);
  return h;
}

struct RobustFitConfig {
  double tuning_constant = 4.685;
  double mad_scale = 0.6745;
  int max_iterations = 50;
  double tolerance = 1e-6;
  WeightFunction weight_function = WeightFunction::Bisquare;

  void validate() const {
    if (!(tuning_constant > 0.0))
      throw InvalidInput("tuning constant must be positive");
    if (!(mad_scale > 0.0))
      throw InvalidInput("MAD scale must be positive");
    if (max_iterations < 1)
      throw InvalidInput("max_iterations must be at least 1");
    if (!(tolerance > 0.0))
      throw InvalidInput("convergence tolerance must be positive");
  }
};

struct RobustFitResult {
  Coefficients coefficients;
  WeightVector final_weights;
  int iterations = 0;
  bool converged = false;
  double robust_scale = 0.0;
};

namespace detail {

inline double relative_change(std::span<const double> prev,
                              std::span<const double> next) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    diff = std::max(diff, std::abs(next[i] - prev[i]));
    scale = std::max({scale, std::abs(prev[i]), std::abs(next[i])});
  }
  return scale == 0.0 ? 0.0 : diff / scale;
}

inline std::size_t count_positive(std::span<const double> w) {
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [](double v) { return v > 0.0; }));
}

inline void require_finite(std::span<const double> v, const char *what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw NonFinite(std::string("robust fit produced non-finite ") + what);
}

} // namespace detail

inline RobustFitResult robust_fit(const DesignMatrix &x,
                                  std::span<const double> y,
                                  const RobustFitConfig &config = {}) {
  config.validate();
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n)
    throw DimensionMismatch("response length " + std::to_string(y.size()) +
                            " does not match design rows " +
                            std::to_string(n));

  WeightVector w = equation_weights(y, config.weight_function);
  if (detail::count_positive(w) < p)
    w.assign(n, 1.0);

  RobustFitResult result;
  result.coefficients = weighted_least_squares(x, y, w);
  result.iterations = 1;
  detail::require_finite(result.coefficients, "coefficients");

  const std::vector<double> h = leverage(x);
  const double scale_floor =
      1e-12 * (1.0 + std::abs(median({y.begin(), y.end()})));

  std::vector<double> r(n), adjusted(n), u(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = y[i] - x.predict(i, result.coefficients);
      adjusted[i] = r[i] / std::sqrt(1.0 - h[i]);
    }
    const double s = mad(r) / config.mad_scale;
    result.robust_scale = s;
    if (s < scale_floor) {
      // Exact fit: residual scale is numerically zero.
      w.assign(n, 1.0);
      result.converged = true;
      break;
    }
    if (result.iterations >= config.max_iterations)
      break;

    for (std::size_t i = 0; i < n; ++i)
      u[i] = adjusted[i] / (config.tuning_constant * s);
    WeightVector next_w = robust_weights(u, config.weight_function);
    if (detail::count_positive(next_w) < p)
      break;

    Coefficients next = weighted_least_squares(x, y, next_w);
    detail::require_finite(next, "coefficients");
    ++result.iterations;
    const double change = detail::relative_change(result.coefficients, next);
    result.coefficients = std::move(next);
    w = std::move(next_w);
    if (change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.final_weights = std::move(w);
  return result;
}

struct MergedCoefficients {
  Coefficients coefficients;
  double weight = 0.0;
};

/// Weighted mean of two coefficient vectors; the result carries the summed
/// weight so merges can be chained.
inline MergedCoefficients merge_coefficients(std::span<const double> p,
                                             double wp,
                                             std::span<const double> s,
                                             double ws) {
  if (p.size() != s.size())
    throw DimensionMismatch("cannot merge coefficient vectors of length " +
                            std::to_string(p.size()) + " and " +
                            std::to_string(s.size()));
  if (!(wp >= 0.0) || !(ws >= 0.0))
    throw InvalidInput("merge weights must be non-negative");
  const double total = wp + ws;
  if (total == 0.0)
    throw ZeroTotalWeight();
  MergedCoefficients out;
  out.weight = total;
  // A zero-weight partner is the identity, bit for bit.
  if (ws == 0.0) {
    out.coefficients.assign(p.begin(), p.end());
    return out;
  }
  if (wp == 0.0) {
    out.coefficients.assign(s.begin(), s.end());
    return out;
  }
  out.coefficients.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out.coefficients[i] = (wp * p[i] + ws * s[i]) / total;
  return out;
}

} // namespace floodcast
