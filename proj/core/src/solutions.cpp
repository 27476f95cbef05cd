#include "hl/solutions.hpp"

#include <algorithm>
#include <cmath>

#include "hl/errors.hpp"
#include "hl/scattering.hpp"

namespace hl {

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("empty sample grid");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < 0)
    throw ConfigError("sample grid must be increasing and nonnegative");
}

OdeOptions ode_opts(const Tolerances& tol) {
  OdeOptions o;
  o.rel = tol.ode_rel;
  o.abs = tol.ode_abs;
  return o;
}

// Solution with exact plane-wave data e^{i sign k x} I at the support end,
// integrated backward through the potential region.
WaveSolutionSample asymptotic_solution(const PotentialSpec& p, Complex k, double sign,
                                       const std::vector<double>& grid, const Tolerances& tol) {
  if (k == 0.0) throw ZeroK("plane-wave solutions are defined for k != 0 only");
  if (k.imag() < -1e-14) throw ConfigError("asymptotic solutions require Im k >= 0");
  check_grid(grid);
  const int n = p.channels();
  const Complex q = sign * k;

  WaveSolutionSample s;
  s.k = k;
  s.grid = grid;
  s.values.resize(grid.size());
  s.derivs.resize(grid.size());

  const double xe = p.support_end();
  std::vector<double> inner;  // points inside the support, descending
  for (size_t i = grid.size(); i-- > 0;) {
    if (grid[i] >= xe) {
      const Complex ph = std::exp(kI * q * grid[i]);
      s.values[i] = ph * Mat::Identity(n, n);
      s.derivs[i] = (kI * q * ph) * Mat::Identity(n, n);
    } else {
      inner.push_back(grid[i]);
    }
  }
  if (inner.empty()) return s;

  const Complex ph = std::exp(kI * q * xe);
  const Mat psi0 = ph * Mat::Identity(n, n);
  const Mat dpsi0 = (kI * q * ph) * Mat::Identity(n, n);
  // inner is descending; map emit indices back to ascending grid positions
  std::vector<size_t> pos(inner.size());
  for (size_t j = 0; j < inner.size(); ++j) {
    pos[j] = static_cast<size_t>(
        std::lower_bound(grid.begin(), grid.end(), inner[j]) - grid.begin());
  }
  integrate_schrodinger(
      p, k, xe, psi0, dpsi0, inner,
      [&](size_t j, const Mat& v, const Mat& d) {
        s.values[pos[j]] = v;
        s.derivs[pos[j]] = d;
      },
      ode_opts(tol));
  return s;
}

}  // namespace

WaveSolutionSample WaveSolutionSample::adjoint() const {
  WaveSolutionSample a;
  a.k = k;
  a.grid = grid;
  a.values.reserve(values.size());
  a.derivs.reserve(derivs.size());
  for (const auto& v : values) a.values.push_back(v.adjoint());
  for (const auto& d : derivs) a.derivs.push_back(d.adjoint());
  return a;
}

WaveSolutionSample jost_solution(const PotentialSpec& p, Complex k,
                                 const std::vector<double>& grid, const Tolerances& tol) {
  return asymptotic_solution(p, k, +1.0, grid, tol);
}

WaveSolutionSample second_solution(const PotentialSpec& p, Complex k,
                                   const std::vector<double>& grid, const Tolerances& tol) {
  return asymptotic_solution(p, k, -1.0, grid, tol);
}

WaveSolutionSample regular_solution(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                                    const std::vector<double>& grid, const Tolerances& tol) {
  if (bp.n != p.channels()) throw DimensionMismatch("boundary pair / potential size mismatch");
  check_grid(grid);

  WaveSolutionSample s;
  s.k = k;
  s.grid = grid;
  s.values.resize(grid.size());
  s.derivs.resize(grid.size());
  integrate_schrodinger(
      p, k, 0.0, bp.A, bp.B, grid,
      [&](size_t i, const Mat& v, const Mat& d) {
        s.values[i] = v;
        s.derivs[i] = d;
      },
      ode_opts(tol));
  return s;
}

WaveSolutionSample physical_solution(const PotentialSpec& p, const BoundaryPair& bp, double k,
                                     const std::vector<double>& grid, const Tolerances& tol) {
  if (k == 0.0) throw ZeroK("physical solution is defined for real k != 0 only");
  const SMatrixSample sm = scattering_matrix(p, bp, k, tol);
  const WaveSolutionSample fm = jost_solution(p, Complex(-k), grid, tol);
  const WaveSolutionSample fp = jost_solution(p, Complex(k), grid, tol);

  WaveSolutionSample s;
  s.k = k;
  s.grid = grid;
  s.values.resize(grid.size());
  s.derivs.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    s.values[i] = 0.5 * fm.values[i] + 0.5 * fp.values[i] * sm.S;
    s.derivs[i] = 0.5 * fm.derivs[i] + 0.5 * fp.derivs[i] * sm.S;
  }
  return s;
}

Mat wronskian(const WaveSolutionSample& F, const WaveSolutionSample& G, size_t i) {
  if (F.grid != G.grid) throw GridMismatch("Wronskian factors sampled on different grids");
  if (i >= F.grid.size()) throw GridMismatch("Wronskian index out of range");
  return F.values[i] * G.derivs[i] - F.derivs[i] * G.values[i];
}

double ode_residual(const WaveSolutionSample& s, const PotentialSpec& p) {
  // psi'' jumps where V does, so the second-difference stencil is meaningless
  // on intervals that straddle a breakpoint of V; skip those points.
  std::vector<double> kinks = p.stops();
  kinks.push_back(p.support_end());
  auto straddles_kink = [&](double lo, double hi) {
    for (double c : kinks)
      if (lo < c && c < hi) return true;
    return false;
  };
  double worst = 0;
  for (size_t i = 1; i + 1 < s.grid.size(); ++i) {
    if (straddles_kink(s.grid[i - 1], s.grid[i + 1])) continue;
    const double h1 = s.grid[i] - s.grid[i - 1];
    const double h2 = s.grid[i + 1] - s.grid[i];
    const Mat dd = 2.0 / (h1 + h2) *
                   ((s.values[i + 1] - s.values[i]) / h2 - (s.values[i] - s.values[i - 1]) / h1);
    const Mat res = -dd + p.eval(s.grid[i]) * s.values[i] - s.k * s.k * s.values[i];
    worst = std::max(worst, res.norm() / std::max(1.0, s.values[i].norm()));
  }
  return worst;
}

}  // namespace hl
