#include "hl/ode.hpp"

#include <algorithm>
#include <cmath>

#include "hl/errors.hpp"

namespace hl {

void free_propagate(Complex k, double a, double b, Mat& psi, Mat& dpsi) {
  const Complex d = k * (b - a);
  const Complex c = std::cos(d), s = std::sin(d);
  const Mat p0 = psi, p1 = dpsi;
  psi = c * p0 + (s / k) * p1;
  dpsi = -k * s * p0 + c * p1;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kB5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
constexpr double kB4[7] = {5179.0 / 57600,    0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct Stepper {
  const PotentialSpec& p;
  Complex k2;
  int n;

  // State Y is n x 2n: [psi | dpsi].
  Mat deriv(double x, const Mat& y) const {
    Mat f(n, 2 * n);
    f.leftCols(n) = y.rightCols(n);
    f.rightCols(n) = p.eval(x) * y.leftCols(n) - k2 * y.leftCols(n);
    return f;
  }

  double error_norm(const Mat& e, const Mat& y0, const Mat& y1, const OdeOptions& o) const {
    double s = 0;
    for (int i = 0; i < e.rows(); ++i)
      for (int j = 0; j < e.cols(); ++j) {
        const double sc = o.abs + o.rel * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
        const double q = std::abs(e(i, j)) / sc;
        s += q * q;
      }
    return std::sqrt(s / (e.rows() * e.cols()));
  }
};

}  // namespace

void integrate_schrodinger(const PotentialSpec& p, Complex k, double x0, Mat psi, Mat dpsi,
                           const std::vector<double>& outputs,
                           const std::function<void(size_t, const Mat&, const Mat&)>& emit,
                           const OdeOptions& opt) {
  const int n = p.channels();
  Stepper st{p, k * k, n};

  // Build the monotone list of forced boundaries: outputs plus potential
  // breakpoints inside the span.
  if (outputs.empty()) return;
  const double dir = (outputs.back() >= x0) ? 1.0 : -1.0;
  std::vector<double> bounds = outputs;
  const double lo = std::min(x0, outputs.back()), hi = std::max(x0, outputs.back());
  for (double sxx : p.stops())
    if (sxx > lo && sxx < hi) bounds.push_back(sxx);
  if (p.support_end() > lo && p.support_end() < hi) bounds.push_back(p.support_end());
  std::sort(bounds.begin(), bounds.end());
  if (dir < 0) std::reverse(bounds.begin(), bounds.end());

  Mat y(n, 2 * n);
  y.leftCols(n) = psi;
  y.rightCols(n) = dpsi;

  double x = x0;
  double h = dir * std::max(1e-6, std::abs(outputs.back() - x0) / 100.0);
  long steps = 0;
  size_t out_idx = 0;
  Mat ks[7];

  for (double target : bounds) {
    if ((target - x) * dir <= 1e-300) {
      // output point at (or behind) current position
      while (out_idx < outputs.size() && outputs[out_idx] == target) {
        emit(out_idx, y.leftCols(n), y.rightCols(n));
        ++out_idx;
      }
      continue;
    }
    // Free region shortcut: exact propagation outside the potential support.
    const double seg_lo = std::min(x, target), seg_hi = std::max(x, target);
    if (seg_lo >= p.support_end() || p.is_zero()) {
      Mat ps = y.leftCols(n), dp = y.rightCols(n);
      free_propagate(k, x, target, ps, dp);
      y.leftCols(n) = ps;
      y.rightCols(n) = dp;
      x = target;
    } else {
      (void)seg_hi;
      while ((target - x) * dir > 0) {
        if (++steps > opt.max_steps) throw SolveDiverged("adaptive stepper exceeded max steps");
        if (std::abs(h) > std::abs(target - x)) h = target - x;
        ks[0] = st.deriv(x, y);
        Mat ytmp;
        for (int s = 1; s < 7; ++s) {
          ytmp = y;
          for (int j = 0; j < s; ++j) ytmp += (h * kA[s][j]) * ks[j];
          ks[s] = st.deriv(x + kC[s] * h, ytmp);
        }
        Mat y5 = y, err = Mat::Zero(n, 2 * n);
        for (int s = 0; s < 7; ++s) {
          y5 += (h * kB5[s]) * ks[s];
          err += (h * (kB5[s] - kB4[s])) * ks[s];
        }
        if (!y5.allFinite()) throw SolveDiverged("state became non-finite");
        const double e = st.error_norm(err, y, y5, opt);
        if (e <= 1.0) {
          x += h;
          y = y5;
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(e, 1e-16), -0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x)))
          throw SolveDiverged("step size underflow");
      }
      x = target;
    }
    while (out_idx < outputs.size() && outputs[out_idx] == target) {
      emit(out_idx, y.leftCols(n), y.rightCols(n));
      ++out_idx;
    }
  }
}

}  // namespace hl
