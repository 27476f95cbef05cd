#include "hl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hl/errors.hpp"

namespace hl {

namespace {

Complex det_jost(const PotentialSpec& p, const BoundaryPair& bp, double kappa,
                 const Tolerances& tol) {
  return jost_matrix(p, bp, Complex(0.0, kappa), tol).determinant();
}

double sup_norm_v(const PotentialSpec& p) {
  if (p.is_zero()) return 0;
  double m = 0;
  for (double x : linspace(0.0, p.support_end(), 1001)) m = std::max(m, p.eval(x).norm());
  return m;
}

double max_pos_cot(const NormalForm& nf) {
  double c = 0;
  for (int j = 0; j < nf.n_M; ++j)
    c = std::max(c, 1.0 / std::tan(nf.thetas[static_cast<size_t>(j)]));
  return c;
}

double kappa_upper_bound(const PotentialSpec& p, const BoundaryPair& bp, const Tolerances& tol) {
  return std::sqrt(sup_norm_v(p) + 1.0) + max_pos_cot(normal_form(bp, tol)) + 2.0;
}

// Null-space data of J(i kappa) at a candidate root.
bool null_space_at(const PotentialSpec& p, const BoundaryPair& bp, double kappa,
                   const Tolerances& tol, BoundState& out) {
  const Mat J = jost_matrix(p, bp, Complex(0.0, kappa), tol);
  Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  int m = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol.null_space * std::max(smax, 1.0)) ++m;
  if (m == 0) return false;
  out.kappa = kappa;
  out.E = -kappa * kappa;
  out.m = m;
  out.vectors = svd.matrixV().rightCols(m);
  return true;
}

}  // namespace

std::vector<BoundState> bound_states(const PotentialSpec& p, const BoundaryPair& bp,
                                     double kappa_min, double kappa_max, const Tolerances& tol,
                                     int scan_points) {
  if (!(kappa_min > 0) || !(kappa_max > kappa_min))
    throw ConfigError("kappa range must satisfy 0 < kappa_min < kappa_max");

  const std::vector<double> ks = logspace(kappa_min, kappa_max, scan_points);
  std::vector<Complex> ds(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) ds[i] = det_jost(p, bp, ks[i], tol);

  std::vector<double> roots;
  auto refine_sign_change = [&](double lo, double hi, Complex dlo) {
    // Bisect the determinant projected onto the phase at the left end.
    const Complex phase = dlo / std::abs(dlo);
    auto proj = [&](double kap) { return (det_jost(p, bp, kap, tol) / phase).real(); };
    double flo = std::abs(dlo);
    int it = 0;
    while (hi - lo > tol.root * std::max(1.0, hi)) {
      if (++it > 200) throw RootFindStall("bisection on det J(i kappa) failed to converge");
      const double mid = 0.5 * (lo + hi);
      const double fm = proj(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  };

  auto refine_minimum = [&](double lo, double hi) {
    // Golden-section search on |det| catches even-multiplicity roots that
    // produce no sign change.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double cc = b - gr * (b - a), d = a + gr * (b - a);
    double fc = std::abs(det_jost(p, bp, cc, tol)), fd = std::abs(det_jost(p, bp, d, tol));
    for (int it = 0; it < 120 && b - a > tol.root * std::max(1.0, b); ++it) {
      if (fc < fd) {
        b = d;
        d = cc;
        fd = fc;
        cc = b - gr * (b - a);
        fc = std::abs(det_jost(p, bp, cc, tol));
      } else {
        a = cc;
        cc = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = std::abs(det_jost(p, bp, d, tol));
      }
    }
    roots.push_back(0.5 * (a + b));
  };

  for (size_t i = 0; i + 1 < ks.size(); ++i) {
    const double proj = (ds[i] * std::conj(ds[i + 1])).real();
    if (proj < 0) {
      refine_sign_change(ks[i], ks[i + 1], ds[i]);
    } else if (i > 0 && std::abs(ds[i]) < std::abs(ds[i - 1]) &&
               std::abs(ds[i]) < std::abs(ds[i + 1]) &&
               std::abs(ds[i]) < 1e-4 * std::max(std::abs(ds[i - 1]), std::abs(ds[i + 1]))) {
      refine_minimum(ks[i - 1], ks[i + 1]);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<BoundState> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back().kappa) < 1e-8 * std::max(1.0, r)) continue;
    BoundState bs;
    if (null_space_at(p, bp, r, tol, bs)) out.push_back(std::move(bs));
  }
  std::sort(out.begin(), out.end(),
            [](const BoundState& a, const BoundState& b) { return a.E < b.E; });
  return out;
}

DiscreteHamiltonian::DiscreteHamiltonian(const PotentialSpec& p, const BoundaryPair& bp, double h,
                                         double x_max, const Tolerances& tol)
    : h_(h), tol_(tol) {
  if (!(h > 0) || !(x_max > h)) throw ConfigError("need h > 0 and x_max > h");
  n_ = bp.n;
  if (p.channels() != n_) throw DimensionMismatch("boundary pair / potential size mismatch");
  const NormalForm nf = normal_form(bp, tol);
  M_ = nf.M;
  n_D_ = nf.n_D;
  red_ = n_ - n_D_;
  cot_ = cot_hat(nf);

  // Channels kept at node 0: mixed block, then Neumann tail (Dirichlet block
  // sits in between in normal-form ordering).
  keep_.clear();
  for (int c = 0; c < nf.n_M; ++c) keep_.push_back(c);
  for (int c = nf.n_M + nf.n_D; c < n_; ++c) keep_.push_back(c);
  R_ = Mat::Zero(red_, n_);
  for (int a = 0; a < red_; ++a) R_(a, keep_[static_cast<size_t>(a)]) = 1.0;

  nodes_ = std::lround(x_max / h);
  size_ = red_ + (nodes_ - 1) * static_cast<long>(n_);
  if (size_ > 10'000'000) throw OutOfMemory("discretization exceeds 1e7 unknowns");

  grid_.resize(static_cast<size_t>(nodes_));
  for (long j = 0; j < nodes_; ++j) grid_[static_cast<size_t>(j)] = h * static_cast<double>(j);

  // Potential term from cell averages, with cells split at the breakpoints of
  // V; plain node sampling loses an O(h) chunk when a node sits on a jump.
  std::vector<double> kinks = p.stops();
  kinks.push_back(p.support_end());
  std::sort(kinks.begin(), kinks.end());
  auto cell_average = [&](double a, double b) -> Mat {
    std::vector<double> cuts{a};
    for (double s : kinks)
      if (a < s && s < b) cuts.push_back(s);
    cuts.push_back(b);
    Mat acc = Mat::Zero(n_, n_);
    for (size_t c = 0; c + 1 < cuts.size(); ++c)
      acc += (cuts[c + 1] - cuts[c]) * p.eval(0.5 * (cuts[c] + cuts[c + 1]));
    return acc / (b - a);
  };

  diag_.resize(static_cast<size_t>(nodes_));
  const Mat id = Mat::Identity(n_, n_);
  for (long j = 1; j < nodes_; ++j) {
    const double xj = grid_[static_cast<size_t>(j)];
    const Mat vt = M_.adjoint() * cell_average(xj - 0.5 * h, xj + 0.5 * h) * M_;
    diag_[static_cast<size_t>(j)] = (2.0 / h) * id + h * vt;
  }
  const Mat vt0 = M_.adjoint() * cell_average(0.0, 0.5 * h) * M_;
  Mat d0 = Mat::Zero(red_, red_);
  for (int a = 0; a < red_; ++a) {
    for (int b = 0; b < red_; ++b)
      d0(a, b) = 0.5 * h * vt0(keep_[static_cast<size_t>(a)], keep_[static_cast<size_t>(b)]);
    d0(a, a) += 1.0 / h - cot_(keep_[static_cast<size_t>(a)]);
  }
  diag_[0] = d0;
}

double DiscreteHamiltonian::resolvent_trace(double z) const {
  const long N = nodes_;
  const double h = h_;
  const double coup2 = 1.0 / (h * h);
  const Mat C0 = (-1.0 / h) * R_;  // block (0, 1)

  auto shifted = [&](long j) -> Mat {
    if (j == 0) return diag_[0] - (0.5 * h * z) * Mat::Identity(red_, red_);
    return diag_[static_cast<size_t>(j)] - (h * z) * Mat::Identity(n_, n_);
  };

  const long start = (red_ == 0) ? 1 : 0;
  std::vector<Mat> P(static_cast<size_t>(N));
  P[static_cast<size_t>(start)] = shifted(start);
  for (long j = start + 1; j < N; ++j) {
    const Mat pinv = P[static_cast<size_t>(j - 1)].inverse();
    if (j == 1 && red_ > 0)
      P[1] = shifted(1) - C0.adjoint() * pinv * C0;
    else
      P[static_cast<size_t>(j)] = shifted(j) - coup2 * pinv;
  }

  double tr = 0;
  Mat Qnext;
  for (long j = N - 1; j >= start; --j) {
    Mat Q;
    if (j == N - 1)
      Q = shifted(j);
    else if (j == 0)
      Q = shifted(0) - C0 * Qnext.inverse() * C0.adjoint();
    else
      Q = shifted(j) - coup2 * Qnext.inverse();
    const Mat G = (P[static_cast<size_t>(j)] + Q - shifted(j)).inverse();
    tr += ((j == 0) ? 0.5 * h : h) * G.trace().real();
    Qnext = Q;
  }
  return tr;
}

Vec DiscreteHamiltonian::mass_apply(const Vec& u) const {
  Vec y = h_ * u;
  y.head(red_) *= 0.5;
  return y;
}

Vec DiscreteHamiltonian::solve_shifted(double sigma, const Vec& b) const {
  const long N = nodes_;
  const double coup = -1.0 / h_;
  const Mat C0 = coup * R_;
  const Mat Ci = coup * Mat::Identity(n_, n_);

  auto shifted = [&](long j) -> Mat {
    if (j == 0) return diag_[0] - (0.5 * h_ * sigma) * Mat::Identity(red_, red_);
    return diag_[static_cast<size_t>(j)] - (h_ * sigma) * Mat::Identity(n_, n_);
  };
  auto block = [&](Vec& v, long j) {
    return j == 0 ? v.head(red_) : v.segment(red_ + (j - 1) * n_, n_);
  };

  const long start = (red_ == 0) ? 1 : 0;
  std::vector<Mat> Pinv(static_cast<size_t>(N));
  Vec y = b;
  Pinv[static_cast<size_t>(start)] = shifted(start).inverse();
  for (long j = start + 1; j < N; ++j) {
    const Mat& C = (j == 1 && red_ > 0) ? C0 : Ci;
    const Mat L = C.adjoint() * Pinv[static_cast<size_t>(j - 1)];
    Pinv[static_cast<size_t>(j)] = Mat(shifted(j) - L * C).inverse();
    block(y, j) -= L * Vec(block(y, j - 1));
  }
  Vec x = Vec::Zero(size_);
  block(x, N - 1) = Pinv[static_cast<size_t>(N - 1)] * Vec(block(y, N - 1));
  for (long j = N - 2; j >= start; --j) {
    const Mat& C = (j == 0) ? C0 : Ci;
    block(x, j) = Pinv[static_cast<size_t>(j)] * Vec(block(y, j) - C * Vec(block(x, j + 1)));
  }
  return x;
}

Vec DiscreteHamiltonian::k_apply(const Vec& u) const {
  const double coup = -1.0 / h_;
  const Mat C0 = coup * R_;
  auto cblock = [&](const Vec& v, long j) {
    return j == 0 ? v.head(red_) : v.segment(red_ + (j - 1) * n_, n_);
  };
  Vec Ku = Vec::Zero(size_);
  for (long j = (red_ == 0 ? 1 : 0); j < nodes_; ++j) {
    Vec t = diag_[static_cast<size_t>(j)] * cblock(u, j);
    if (j == 0) {
      t += C0 * Vec(cblock(u, 1));
    } else {
      if (j == 1 && red_ > 0) t += C0.adjoint() * Vec(cblock(u, 0));
      if (j > 1) t += coup * Vec(cblock(u, j - 1));
      if (j + 1 < nodes_) t += coup * Vec(cblock(u, j + 1));
    }
    if (j == 0)
      Ku.head(red_) = t;
    else
      Ku.segment(red_ + (j - 1) * n_, n_) = t;
  }
  return Ku;
}

double DiscreteHamiltonian::rayleigh(const Vec& u) const {
  return u.dot(k_apply(u)).real() / u.dot(mass_apply(u)).real();
}

long DiscreteHamiltonian::count_below(double z) const {
  // Block LDL^dag of K - z D; by Sylvester's law the eigenvalue count below z
  // equals the number of negative eigenvalues over the pivot blocks.
  const double coup2 = 1.0 / (h_ * h_);
  const Mat C0 = (-1.0 / h_) * R_;
  auto shifted = [&](long j) -> Mat {
    if (j == 0) return diag_[0] - (0.5 * h_ * z) * Mat::Identity(red_, red_);
    return diag_[static_cast<size_t>(j)] - (h_ * z) * Mat::Identity(n_, n_);
  };
  const long start = (red_ == 0) ? 1 : 0;
  long neg = 0;
  Mat P;
  for (long j = start; j < nodes_; ++j) {
    if (j == start)
      P = shifted(j);
    else if (j == 1 && red_ > 0)
      P = shifted(1) - C0.adjoint() * P.inverse() * C0;
    else
      P = shifted(j) - coup2 * P.inverse();
    Eigen::SelfAdjointEigenSolver<Mat> es(P, Eigen::EigenvaluesOnly);
    for (long i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < 0) ++neg;
  }
  return neg;
}

GridFunction DiscreteHamiltonian::to_grid_function(const Vec& u) const {
  GridFunction g;
  g.grid = grid_;
  g.values = Mat::Zero(n_, static_cast<long>(grid_.size()));
  Vec v0 = Vec::Zero(n_);
  for (int a = 0; a < red_; ++a) v0(keep_[static_cast<size_t>(a)]) = u(a);
  g.values.col(0) = M_ * v0;
  for (long j = 1; j < nodes_; ++j)
    g.values.col(j) = M_ * u.segment(red_ + (j - 1) * n_, n_);
  return g;
}

Vec DiscreteHamiltonian::pack(const GridFunction& f) const {
  Vec u(size_);
  const Vec v0 = M_.adjoint() * f.values.col(0);
  for (int a = 0; a < red_; ++a) u(a) = v0(keep_[static_cast<size_t>(a)]);
  for (long j = 1; j < nodes_; ++j)
    u.segment(red_ + (j - 1) * n_, n_) = M_.adjoint() * f.values.col(j);
  return u;
}

DiscreteHamiltonian::Mode DiscreteHamiltonian::iterate(double sigma,
                                                       const std::vector<Vec>& deflate) const {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Vec u(size_);
  for (long i = 0; i < size_; ++i) u(i) = Complex(nd(rng), 0.1 * nd(rng));

  auto project_out = [&](Vec& v) {
    for (const Vec& w : deflate) v -= w.dot(mass_apply(v)) * w;
  };
  auto d_normalize = [&](Vec& v) { v /= std::sqrt(v.dot(mass_apply(v)).real()); };

  project_out(u);
  d_normalize(u);
  double E = rayleigh(u);
  for (int it = 0; it < 60; ++it) {
    Vec w = solve_shifted(sigma, mass_apply(u));
    project_out(w);
    d_normalize(w);
    const double Enew = rayleigh(w);
    const double delta = std::abs(Enew - E);
    u = std::move(w);
    E = Enew;
    if (delta < 1e-12 * std::max(1.0, std::abs(E)) && it > 2) break;
  }
  Mode m;
  m.E = E;
  m.psi = to_grid_function(u);
  return m;
}

DiscreteHamiltonian::Mode DiscreteHamiltonian::ground_state() const {
  double cmax = 0;
  for (int c = 0; c < n_; ++c) cmax = std::max(cmax, cot_(c));
  double vmax = 0;
  for (long j = 1; j < nodes_; ++j)
    vmax = std::max(vmax, (diag_[static_cast<size_t>(j)] -
                           (2.0 / h_) * Mat::Identity(n_, n_)).norm() / h_);
  double hi = cmax * cmax + vmax + 10.0;
  while (count_below(hi) < 1) hi = 2.0 * hi + 1.0;
  auto ms = modes_below(hi, 1);
  return ms.front();
}

std::vector<DiscreteHamiltonian::Mode> DiscreteHamiltonian::modes_below(double E_max,
                                                                        int max_count) const {
  std::vector<Mode> out;
  std::vector<Vec> found;

  // Certified lower end of the spectrum via the inertia count.
  double cmax = 0;
  for (int c = 0; c < n_; ++c) cmax = std::max(cmax, cot_(c));
  double vmax = 0;
  for (long j = 1; j < nodes_; ++j)
    vmax = std::max(vmax, (diag_[static_cast<size_t>(j)] -
                           (2.0 / h_) * Mat::Identity(n_, n_)).norm() / h_);
  double floor = -(cmax * cmax) - vmax - 10.0;
  while (count_below(floor) > 0) floor = 2.0 * floor - 1.0;

  for (int i = 0; i < max_count; ++i) {
    const long want = i + 1;
    if (count_below(E_max) < want) break;
    // Bisect for the want-th eigenvalue, keeping lo strictly below it; then a
    // fixed-shift inverse iteration from lo converges in a few steps.
    double lo = floor, hi = E_max;
    while (hi - lo > 1e-10 * std::max(1.0, std::abs(lo))) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) < want)
        lo = mid;
      else
        hi = mid;
    }
    Mode m = iterate(lo, found);
    Vec u = pack(m.psi);
    u /= std::sqrt(u.dot(mass_apply(u)).real());
    found.push_back(std::move(u));
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const Mode& a, const Mode& b) { return a.E < b.E; });
  return out;
}

GridFunction DiscreteHamiltonian::apply(const GridFunction& f) const {
  if (f.grid.size() != grid_.size() || f.values.rows() != n_)
    throw GridMismatch("function not sampled on the discretization grid");
  Vec Ku = k_apply(pack(f));
  Ku.head(red_) /= 0.5 * h_;
  Ku.tail(size_ - red_) /= h_;
  return to_grid_function(Ku);
}

namespace {

ArgBranch tracked_branch(const PotentialSpec& p, const BoundaryPair& bp, std::vector<double> ks,
                         int n_D, const Tolerances& tol) {
  auto eval = [&](double k) {
    return p.is_zero() ? free_smatrix(bp, k, tol) : scattering_matrix(p, bp, k, tol);
  };
  return track_det_arg(eval, std::move(ks), n_D);
}

double branch_at(const ArgBranch& br, double k) {
  // tracker keeps every input point, so k is present up to roundoff
  size_t lo = 0, hi = br.samples.size();
  while (lo + 1 < hi) {
    const size_t mid = (lo + hi) / 2;
    if (br.samples[mid].k <= k * (1 + 1e-14)) lo = mid;
    else hi = mid;
  }
  return br.theta[lo];
}

}  // namespace

SsfResult ssf(const PotentialSpec& p, const BoundaryPair& bp, const std::vector<double>& E_grid,
              const Tolerances& tol) {
  SsfResult res;
  const NormalForm nf = normal_form(bp, tol);
  res.n_D = nf.n_D;
  res.bound = bound_states(p, bp, 1e-3, kappa_upper_bound(p, bp, tol), tol);

  std::vector<double> ks;
  double kmax = 0;
  for (double E : E_grid)
    if (E > 0) {
      ks.push_back(std::sqrt(E));
      kmax = std::max(kmax, ks.back());
    }
  ArgBranch br;
  if (!ks.empty()) {
    const double anchor = std::max(kmax, 50.0);
    const double lo = std::min(*std::min_element(ks.begin(), ks.end()), tol.k_min);
    for (double k : logspace(lo, anchor, 200)) ks.push_back(k);
    br = tracked_branch(p, bp, std::move(ks), res.n_D, tol);
  }

  for (double E : E_grid) {
    SsfSample s;
    s.E = E;
    if (E > 0) {
      s.xi = -branch_at(br, std::sqrt(E)) / (2 * kPi);
    } else {
      int count = 0;
      for (const auto& b : res.bound)
        if (b.E < E) count += b.m;
      s.xi = -count;
    }
    res.samples.push_back(s);
  }
  return res;
}

LevinsonReport levinson_check(const PotentialSpec& p, const BoundaryPair& bp,
                              const Tolerances& tol) {
  LevinsonReport rep;
  rep.n = bp.n;
  const NormalForm nf = normal_form(bp, tol);

  const double k0 = 1e-2, k1 = 5e-3, k2 = 2.5e-3;
  auto sample = [&](double k) {
    return p.is_zero() ? free_smatrix(bp, k, tol) : scattering_matrix(p, bp, k, tol);
  };
  const Mat Sa = sample(k0).S, Sb = sample(k1).S, Sc = sample(k2).S;
  const Mat first = 2.0 * Sb - Sa;
  const Mat second = 2.0 * Sc - Sb;
  if ((second - first).norm() > tol.extrap)
    throw ExtrapolationUnstable("S(k) extrapolation to k=0 is inconsistent");
  rep.S0 = 2.0 * second - first;

  Eigen::ComplexEigenSolver<Mat> es(rep.S0);
  for (int i = 0; i < bp.n; ++i)
    if (std::abs(es.eigenvalues()(i) - 1.0) < tol.eig_plus_one) ++rep.mu;

  for (const auto& b : bound_states(p, bp, 1e-3, kappa_upper_bound(p, bp, tol), tol))
    rep.N += b.m;

  std::vector<double> ks = logspace(k2, 50.0, 300);
  ks.push_back(k1);
  ks.push_back(k0);
  const ArgBranch br = tracked_branch(p, bp, std::move(ks), nf.n_D, tol);
  const double t0 = branch_at(br, k0), t1 = branch_at(br, k1), t2 = branch_at(br, k2);
  const double theta0 = 4.0 * t2 - 4.0 * t1 + t0;  // two Richardson levels
  rep.xi0_plus = -theta0 / (2 * kPi);
  rep.defect = std::abs(rep.xi0_plus - 0.5 * (rep.n - rep.mu) + rep.N);
  return rep;
}

TraceReport trace_formula_check(const PotentialSpec& p, const BoundaryPair& bp, double c,
                                double h, double x_max, const Tolerances& tol) {
  TraceReport rep;
  auto f = [&](double E) { return 1.0 / (E + c); };
  auto fp = [&](double E) { return -1.0 / ((E + c) * (E + c)); };

  const DiscreteHamiltonian H(p, bp, h, x_max, tol);
  const DiscreteHamiltonian H0(PotentialSpec::zero(bp.n), neumann_bc(bp.n), h, x_max, tol);
  rep.lhs = H.resolvent_trace(-c) - H0.resolvent_trace(-c);

  const NormalForm nf = normal_form(bp, tol);
  double rhs = 0;
  for (const auto& b : bound_states(p, bp, 1e-3, kappa_upper_bound(p, bp, tol), tol))
    rhs += b.m * (f(b.E) - f(0.0));

  const double k_lo = 1e-2, k_hi = 100.0;
  const ArgBranch br = tracked_branch(p, bp, logspace(k_lo, k_hi, 600), nf.n_D, tol);
  // near-zero sliver with the limiting branch value
  rhs += (-br.theta.front() / (2 * kPi)) * (f(k_lo * k_lo) - f(0.0));
  // trapezoid in k over the refined nodes
  for (size_t i = 0; i + 1 < br.samples.size(); ++i) {
    const double ka = br.samples[i].k, kb = br.samples[i + 1].k;
    const double ga = (-br.theta[i] / (2 * kPi)) * fp(ka * ka) * 2 * ka;
    const double gb = (-br.theta[i + 1] / (2 * kPi)) * fp(kb * kb) * 2 * kb;
    rhs += 0.5 * (kb - ka) * (ga + gb);
  }
  // analytic tail with xi -> n_D / 2
  rhs += -(nf.n_D / 2.0) * f(k_hi * k_hi);

  rep.rhs = rhs;
  rep.defect = std::abs(rep.lhs - rep.rhs) / std::max(std::abs(rep.rhs), 1e-12);
  return rep;
}

}  // namespace hl
