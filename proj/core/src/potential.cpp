#include "hl/potential.hpp"

#include <algorithm>
#include <cmath>

#include "hl/errors.hpp"

namespace hl {

namespace {

void check_hermitian_samples(const std::vector<Mat>& vals, int n) {
  for (const auto& v : vals) {
    if (v.rows() != n || v.cols() != n) throw DimensionMismatch("potential sample has wrong shape");
    if (!all_finite(v)) throw NonFinite("potential sample has non-finite entries");
  }
}

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                           0.5384693101056831, 0.9061798459386640};
constexpr double kGw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                           0.4786286704993665, 0.2369268850561891};

}  // namespace

PotentialSpec PotentialSpec::zero(int n) {
  PotentialSpec p;
  p.n_ = n;
  p.model_ = Model::Piecewise;
  p.support_end_ = 0;
  return p;
}

PotentialSpec PotentialSpec::piecewise(std::vector<double> breakpoints, std::vector<Mat> values) {
  if (breakpoints.empty() || values.size() != breakpoints.size())
    throw DimensionMismatch("piecewise model needs one matrix per breakpoint");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()) || breakpoints.front() <= 0)
    throw ConfigError("breakpoints must be increasing and positive");
  PotentialSpec p;
  p.n_ = static_cast<int>(values.front().rows());
  check_hermitian_samples(values, p.n_);
  p.model_ = Model::Piecewise;
  p.xs_ = std::move(breakpoints);
  p.vals_ = std::move(values);
  p.support_end_ = p.xs_.back();
  p.stops_.assign(p.xs_.begin(), p.xs_.end() - 1);
  return p;
}

PotentialSpec PotentialSpec::sampled(std::vector<double> grid, std::vector<Mat> values) {
  if (grid.size() < 2 || values.size() != grid.size())
    throw DimensionMismatch("sampled model needs one matrix per grid point");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw ConfigError("sample grid must be increasing");
  PotentialSpec p;
  p.n_ = static_cast<int>(values.front().rows());
  check_hermitian_samples(values, p.n_);
  p.model_ = Model::Sampled;
  p.xs_ = std::move(grid);
  p.vals_ = std::move(values);
  p.support_end_ = p.xs_.back();
  p.stops_.assign(p.xs_.begin(), p.xs_.end() - 1);
  return p;
}

PotentialSpec PotentialSpec::square_well(int n, double depth, double width) {
  return square_well_matrix(-depth * Mat::Identity(n, n), width);
}

PotentialSpec PotentialSpec::square_well_matrix(const Mat& C, double width) {
  if (width <= 0) throw ConfigError("well width must be positive");
  PotentialSpec p;
  p.n_ = static_cast<int>(C.rows());
  check_hermitian_samples({C}, p.n_);
  p.model_ = Model::Builtin;
  p.family_ = Family::SquareWell;
  p.coupling_ = C;
  p.support_end_ = width;
  return p;
}

PotentialSpec PotentialSpec::exp_decay(const Mat& C, double rate, double tail_mass) {
  if (rate <= 0) throw ConfigError("decay rate must be positive");
  PotentialSpec p;
  p.n_ = static_cast<int>(C.rows());
  check_hermitian_samples({C}, p.n_);
  p.model_ = Model::Builtin;
  p.family_ = Family::ExpDecay;
  p.coupling_ = C;
  p.rate_ = rate;
  const double mass = C.norm() / rate;
  p.support_end_ = std::log(std::max(mass / tail_mass, 10.0)) / rate;
  return p;
}

PotentialSpec PotentialSpec::coupled_well(double d1, double d2, double c, double width) {
  Mat C(2, 2);
  C << -d1, c, c, -d2;
  PotentialSpec p = square_well_matrix(C, width);
  p.family_ = Family::CoupledWell;
  return p;
}

bool PotentialSpec::is_zero() const {
  if (model_ == Model::Piecewise && vals_.empty()) return true;
  return false;
}

Mat PotentialSpec::eval(double x) const {
  if (x < 0 || x >= support_end_) return Mat::Zero(n_, n_);
  switch (model_) {
    case Model::Piecewise: {
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      return vals_[static_cast<size_t>(it - xs_.begin())];
    }
    case Model::Sampled: {
      if (x <= xs_.front()) return vals_.front();
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const size_t i = static_cast<size_t>(it - xs_.begin());
      const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return (1 - t) * vals_[i - 1] + t * vals_[i];
    }
    case Model::Builtin:
      if (family_ == Family::ExpDecay) return coupling_ * std::exp(-rate_ * x);
      return coupling_;  // square / coupled well
  }
  return Mat::Zero(n_, n_);
}

PotentialSpec PotentialSpec::conjugated(const Mat& M) const {
  PotentialSpec p = *this;
  for (auto& v : p.vals_) v = M * v * M.adjoint();
  if (p.coupling_.size() > 0) p.coupling_ = M * p.coupling_ * M.adjoint();
  return p;
}

PotentialSpec::Report PotentialSpec::validate(const Tolerances& tol) const {
  Report r{0, 0, 0};
  if (is_zero()) return r;

  auto cell_integrals = [&](double a, double b, auto&& f) {
    // 5-point Gauss-Legendre of the matrix norm and its first moment.
    const double mid = (a + b) / 2, half = (b - a) / 2;
    for (int g = 0; g < 5; ++g) {
      const double x = mid + half * kGx[g];
      f(x, half * kGw[g]);
    }
  };

  std::vector<double> edges = stops_;
  edges.insert(edges.begin(), 0.0);
  edges.push_back(support_end_);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    // split long smooth cells for quadrature accuracy
    const int sub = std::max(1, static_cast<int>((edges[i + 1] - edges[i]) / 0.05));
    for (int s = 0; s < sub; ++s) {
      const double a = edges[i] + (edges[i + 1] - edges[i]) * s / sub;
      const double b = edges[i] + (edges[i + 1] - edges[i]) * (s + 1) / sub;
      cell_integrals(a, b, [&](double x, double w) {
        const Mat v = eval(x);
        const double nv = v.operatorNorm();
        r.hermiticity_defect = std::max(r.hermiticity_defect, herm_defect(v));
        r.l1_norm += w * nv;
        r.first_moment += w * x * nv;
      });
    }
  }
  if (r.hermiticity_defect > tol.herm_rel * std::max(1.0, r.l1_norm))
    throw NonHermitian("potential has a non-Hermitian sample");
  if (!std::isfinite(r.l1_norm)) throw NotIntegrable("potential L1 norm diverges");
  return r;
}

PotentialSpec::MomentData PotentialSpec::moments() const {
  MomentData m;
  m.Q1 = Mat::Zero(n_, n_);
  if (is_zero()) {
    const int n = n_;
    m.Q2 = [n](Complex) { return Mat::Zero(n, n); };
    return m;
  }

  // int_a^b e^{2iky} dy, stable at k = 0.
  auto osc = [](Complex k, double a, double b) -> Complex {
    const Complex s = 2.0 * kI * k;
    if (std::abs(s) * (b - a) < 1e-8) return (b - a) * (1.0 + s * (a + b) / 2.0);
    return (std::exp(s * b) - std::exp(s * a)) / s;
  };
  // int_a^b y e^{2iky} dy (for the linear part of sampled cells).
  auto osc1 = [&](Complex k, double a, double b) -> Complex {
    const Complex s = 2.0 * kI * k;
    if (std::abs(s) * (b - a) < 1e-8)
      return (b * b - a * a) / 2.0 + s * (b * b * b - a * a * a) / 3.0;
    return (b * std::exp(s * b) - a * std::exp(s * a)) / s - osc(k, a, b) / s;
  };

  switch (model_) {
    case Model::Piecewise: {
      auto xs = xs_;
      auto vals = vals_;
      double prev = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        m.Q1 += 0.5 * (xs[i] - prev) * vals[i];
        prev = xs[i];
      }
      m.Q2 = [xs, vals, osc, n = n_](Complex k) {
        Mat q = Mat::Zero(n, n);
        double prev = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
          q += 0.5 * osc(k, prev, xs[i]) * vals[i];
          prev = xs[i];
        }
        return q;
      };
      break;
    }
    case Model::Sampled: {
      auto xs = xs_;
      auto vals = vals_;
      for (size_t i = 0; i + 1 < xs.size(); ++i)
        m.Q1 += 0.25 * (xs[i + 1] - xs[i]) * (vals[i] + vals[i + 1]);
      m.Q2 = [xs, vals, osc, osc1, n = n_](Complex k) {
        Mat q = Mat::Zero(n, n);
        for (size_t i = 0; i + 1 < xs.size(); ++i) {
          const double a = xs[i], b = xs[i + 1];
          const Mat slope = (vals[i + 1] - vals[i]) / (b - a);
          const Mat c0 = vals[i] - a * slope;
          q += 0.5 * (osc(k, a, b) * c0 + osc1(k, a, b) * slope);
        }
        return q;
      };
      break;
    }
    case Model::Builtin: {
      const Mat C = coupling_;
      const double X = support_end_;
      if (family_ == Family::ExpDecay) {
        const double r = rate_;
        m.Q1 = 0.5 * C * (1.0 - std::exp(-r * X)) / r;
        m.Q2 = [C, r, X](Complex k) {
          const Complex s = 2.0 * kI * k - r;
          if (std::abs(s) * X < 1e-8) return Mat(0.5 * X * C);
          return Mat(0.5 * C * (std::exp(s * X) - 1.0) / s);
        };
      } else {
        m.Q1 = 0.5 * X * C;
        m.Q2 = [C, X, osc](Complex k) { return Mat(0.5 * osc(k, 0.0, X) * C); };
      }
      break;
    }
  }
  return m;
}

}  // namespace hl
