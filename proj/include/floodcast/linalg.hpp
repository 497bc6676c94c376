#pragma once

// Small dense linear algebra for the normal equations. Systems here are at
// most ~10x10, so a plain row-major matrix and a Cholesky factor suffice.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "floodcast/error.hpp"

namespace floodcast::linalg {

class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double &operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i)
      t += (*this)(i, i);
    return t;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline std::vector<double> multiply(const Matrix &a, std::span<const double> x) {
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
      s += a(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

/// Cholesky factor of a Jacobi-equilibrated symmetric positive definite
/// matrix. Equilibration makes the pivot tolerance scale-free, so columns
/// measured in different units (mm/hr vs m^3/s) do not trip it.
class Cholesky {
public:
  static constexpr double kPivotTolerance = 1e-12;

  static std::optional<Cholesky> factor(const Matrix &a) {
    const std::size_t n = a.rows();
    Cholesky c;
    c.scale_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(a(i, i) > 0.0) || !std::isfinite(a(i, i)))
        return std::nullopt;
      c.scale_[i] = 1.0 / std::sqrt(a(i, i));
    }
    c.lower_ = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      double d = a(j, j) * c.scale_[j] * c.scale_[j];
      for (std::size_t k = 0; k < j; ++k)
        d -= c.lower_(j, k) * c.lower_(j, k);
      if (!(d > kPivotTolerance))
        return std::nullopt;
      const double ljj = std::sqrt(d);
      c.lower_(j, j) = ljj;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = a(i, j) * c.scale_[i] * c.scale_[j];
        for (std::size_t k = 0; k < j; ++k)
          s -= c.lower_(i, k) * c.lower_(j, k);
        c.lower_(i, j) = s / ljj;
      }
    }
    return c;
  }

  std::size_t size() const { return scale_.size(); }

  std::vector<double> solve(std::span<const double> b) const {
    const std::size_t n = size();
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i] * scale_[i];
      for (std::size_t k = 0; k < i; ++k)
        s -= lower_(i, k) * z[k];
      z[i] = s / lower_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = z[ii];
      for (std::size_t k = ii + 1; k < n; ++k)
        s -= lower_(k, ii) * z[k];
      z[ii] = s / lower_(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i)
      z[i] *= scale_[i];
    return z;
  }

private:
  Matrix lower_;
  std::vector<double> scale_;
};

/// Factors `a`, retrying once with a ridge of 1e-10 * trace(a) / n on the
/// diagonal. Throws SingularSystem if both attempts fail. The returned
/// factor belongs to the (possibly ridged) matrix written back to `a`.
inline Cholesky factor_with_ridge(Matrix &a) {
  if (auto c = Cholesky::factor(a))
    return *c;
  const std::size_t n = a.rows();
  const double ridge = 1e-10 * a.trace() / static_cast<double>(n);
  if (ridge > 0.0 && std::isfinite(ridge)) {
    for (std::size_t i = 0; i < n; ++i)
      a(i, i) += ridge;
    if (auto c = Cholesky::factor(a))
      return *c;
  }
  throw SingularSystem("normal-equation matrix is singular after ridge retry");
}

/// Solves a x = b with one step of iterative refinement against `a`.
inline std::vector<double> solve_refined(const Matrix &a, const Cholesky &f,
                                         std::span<const double> b) {
  std::vector<double> x = f.solve(b);
  const std::vector<double> ax = multiply(a, x);
  std::vector<double> r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    r[i] = b[i] - ax[i];
  const std::vector<double> dx = f.solve(r);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] += dx[i];
  return x;
}

} // namespace floodcast::linalg
