#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hl/errors.hpp"
#include "hl/types.hpp"

namespace hl {

inline std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) return {lo};
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  g.back() = hi;
  return g;
}

inline std::vector<double> logspace(double lo, double hi, int count) {
  if (lo <= 0 || hi <= 0) throw ConfigError("log spacing needs positive bounds");
  auto g = linspace(std::log(lo), std::log(hi), count);
  for (auto& x : g) x = std::exp(x);
  g.back() = hi;
  return g;
}

/// Range spec as it appears in scenario configs.
struct RangeSpec {
  double min = 0, max = 0;
  int count = 0;
  bool log = false;
  std::vector<double> materialize() const {
    if (count < 1 || !(min < max)) throw ConfigError("range must have min < max, count >= 1");
    return log ? logspace(min, max, count) : linspace(min, max, count);
  }
};

/// Composite-Simpson weights on a uniform grid (falls back to trapezoid on the
/// last cell when the interval count is odd).
inline std::vector<double> simpson_weights(const std::vector<double>& grid) {
  const size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  const double h = grid[1] - grid[0];
  size_t m = n - 1;  // number of intervals
  size_t even_end = (m % 2 == 0) ? m : m - 1;
  for (size_t i = 0; i + 2 <= even_end; i += 2) {
    w[i] += h / 3;
    w[i + 1] += 4 * h / 3;
    w[i + 2] += h / 3;
  }
  if (m % 2 != 0) {  // trapezoid on the trailing cell
    w[n - 2] += h / 2;
    w[n - 1] += h / 2;
  }
  return w;
}

inline std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
  const size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    const double h = grid[i + 1] - grid[i];
    w[i] += h / 2;
    w[i + 1] += h / 2;
  }
  return w;
}

/// A C^n-valued function sampled on an increasing grid; used both for
/// position-side and k-side data. Values stored as an n x N matrix.
struct GridFunction {
  std::vector<double> grid;
  Mat values;  // n rows, grid.size() columns

  int channels() const { return static_cast<int>(values.rows()); }

  double norm2() const {  // squared L2 norm by trapezoid
    auto w = trapezoid_weights(grid);
    double s = 0;
    for (size_t i = 0; i < grid.size(); ++i) s += w[i] * values.col(i).squaredNorm();
    return s;
  }

  Complex inner(const GridFunction& other) const {
    if (grid.size() != other.grid.size()) throw GridMismatch("grid sizes differ");
    auto w = trapezoid_weights(grid);
    Complex s = 0;
    for (size_t i = 0; i < grid.size(); ++i)
      s += w[i] * other.values.col(i).dot(values.col(i));  // conj(other) . this
    return s;
  }
};

}  // namespace hl
