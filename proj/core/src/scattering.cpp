#include "hl/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "hl/errors.hpp"
#include "hl/grid.hpp"

namespace hl {

namespace {

double principal_arg_det(const Mat& S) {
  Eigen::PartialPivLU<Mat> lu(S);
  return std::arg(lu.determinant());
}

double wrap_pi(double a) {
  while (a > kPi) a -= 2 * kPi;
  while (a <= -kPi) a += 2 * kPi;
  return a;
}

// Composite 4-point Gauss-Legendre nodes over each smooth piece of V; nodes
// are strictly interior, so breakpoints and the support edge never get
// sampled on the wrong side.
void gauss_nodes(const PotentialSpec& p, double k_abs, std::vector<double>& xs,
                 std::vector<double>& ws) {
  static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                               0.8611363115940526};
  static const double gw[4] = {0.34785484513745385, 0.6521451548625461, 0.6521451548625461,
                               0.34785484513745385};
  std::vector<double> edges{0.0};
  for (double s : p.stops())
    if (s > 0 && s < p.support_end()) edges.push_back(s);
  edges.push_back(p.support_end());
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    const double len = b - a;
    size_t cells = static_cast<size_t>(std::max(64.0, 16.0 * len * std::max(1.0, k_abs)));
    cells = std::min<size_t>(cells, 20000);
    for (size_t c = 0; c < cells; ++c) {
      const double lo = a + len * static_cast<double>(c) / static_cast<double>(cells);
      const double half = 0.5 * len / static_cast<double>(cells);
      for (int g = 0; g < 4; ++g) {
        xs.push_back(lo + half * (1.0 + gx[g]));
        ws.push_back(half * gw[g]);
      }
    }
  }
}

}  // namespace

Mat jost_matrix(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                const Tolerances& tol) {
  if (bp.n != p.channels()) throw DimensionMismatch("boundary pair / potential size mismatch");
  const WaveSolutionSample f = jost_solution(p, -std::conj(k), {0.0}, tol);
  return f.values[0].adjoint() * bp.B - f.derivs[0].adjoint() * bp.A;
}

Mat jost_matrix_wronskian(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                          const Tolerances& tol) {
  const double xw = std::max(p.support_end(), 1.0);
  const std::vector<double> grid = {0.0, xw};
  const WaveSolutionSample f = jost_solution(p, -std::conj(k), grid, tol);
  const WaveSolutionSample phi = regular_solution(p, bp, k, grid, tol);
  return wronskian(f.adjoint(), phi, 1);
}

Mat jost_matrix_integral(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                         const Tolerances& tol) {
  const Mat J0 = free_jost(bp, k);
  if (p.is_zero()) return J0;
  std::vector<double> grid, w;
  gauss_nodes(p, std::abs(k), grid, w);
  const WaveSolutionSample phi = regular_solution(p, bp, k, grid, tol);
  Mat acc = Mat::Zero(bp.n, bp.n);
  for (size_t i = 0; i < grid.size(); ++i)
    acc += (w[i] * std::exp(kI * k * grid[i])) * (p.eval(grid[i]) * phi.values[i]);
  return J0 + acc;
}

SMatrixSample scattering_matrix(const PotentialSpec& p, const BoundaryPair& bp, double k,
                                const Tolerances& tol) {
  if (k == 0.0) throw ZeroK("scattering matrix is defined for real k != 0 only");
  const Mat Jp = jost_matrix(p, bp, Complex(k), tol);
  const Mat Jm = jost_matrix(p, bp, Complex(-k), tol);
  // S = -Jm Jp^{-1}: solve Jp^T X = -Jm^T, S = X^T.
  Eigen::PartialPivLU<Mat> lu(Mat(Jp.transpose()));
  if (lu.rcond() < 1.0 / tol.cond_max)
    throw SingularJost("Jost matrix numerically singular at real k");
  SMatrixSample s;
  s.k = k;
  s.S = lu.solve(Mat(-Jm.transpose())).transpose();
  s.unitarity_defect = (s.S * s.S.adjoint() - Mat::Identity(bp.n, bp.n)).norm();
  return s;
}

Mat free_jost(const BoundaryPair& bp, Complex k) {
  return bp.B - kI * k * bp.A;
}

SMatrixSample free_smatrix(const BoundaryPair& bp, double k, const Tolerances& tol) {
  if (k == 0.0) throw ZeroK("scattering matrix is defined for real k != 0 only");
  const Mat Jp = free_jost(bp, Complex(k));
  const Mat Jm = free_jost(bp, Complex(-k));
  Eigen::PartialPivLU<Mat> lu(Mat(Jp.transpose()));
  if (lu.rcond() < 1.0 / tol.cond_max)
    throw SingularJost("free Jost matrix numerically singular");
  SMatrixSample s;
  s.k = k;
  s.S = lu.solve(Mat(-Jm.transpose())).transpose();
  s.unitarity_defect = (s.S * s.S.adjoint() - Mat::Identity(bp.n, bp.n)).norm();
  return s;
}

WaveSolutionSample free_regular(const BoundaryPair& bp, Complex k,
                                const std::vector<double>& grid) {
  if (k == 0.0) throw ZeroK("closed form phi0 evaluated at k != 0 only");
  WaveSolutionSample s;
  s.k = k;
  s.grid = grid;
  s.values.reserve(grid.size());
  s.derivs.reserve(grid.size());
  for (double x : grid) {
    const Complex c = std::cos(k * x), sn = std::sin(k * x);
    s.values.push_back(c * bp.A + (sn / k) * bp.B);
    s.derivs.push_back(-k * sn * bp.A + c * bp.B);
  }
  return s;
}

WaveSolutionSample free_physical(const BoundaryPair& bp, double k,
                                 const std::vector<double>& grid, const Tolerances& tol) {
  const SMatrixSample s0 = free_smatrix(bp, k, tol);
  const Mat id = Mat::Identity(bp.n, bp.n);
  WaveSolutionSample s;
  s.k = k;
  s.grid = grid;
  s.values.reserve(grid.size());
  s.derivs.reserve(grid.size());
  for (double x : grid) {
    const Complex em = std::exp(-kI * k * x), ep = std::exp(kI * k * x);
    s.values.push_back(0.5 * (em * id + ep * s0.S));
    s.derivs.push_back(0.5 * (-kI * k * em * id + kI * k * ep * s0.S));
  }
  return s;
}

HighEnergyModel high_energy_model(const PotentialSpec& p, const BoundaryPair& bp,
                                  const Tolerances& tol) {
  const NormalForm nf = normal_form(bp, tol);
  const int n = bp.n;
  Mat Z0 = Mat::Identity(n, n);
  Mat Z1 = Mat::Zero(n, n);
  for (int j = 0; j < nf.n_M; ++j) Z1(j, j) = 1.0 / std::tan(nf.thetas[static_cast<size_t>(j)]);
  for (int j = nf.n_M; j < nf.n_M + nf.n_D; ++j) Z0(j, j) = -1.0;

  HighEnergyModel m;
  m.S_inf = nf.M * Z0 * nf.M.adjoint();
  const Mat MZ1M = nf.M * Z1 * nf.M.adjoint();
  const auto mom = p.moments();
  const Mat Q1 = mom.Q1;
  const Mat S_inf = m.S_inf;
  m.G = [MZ1M, Q1, S_inf, Q2 = mom.Q2](double k) {
    return Mat(-2.0 * MZ1M + Q1 * S_inf + S_inf * Q1 + S_inf * Q2(Complex(k)) * S_inf +
               Q2(Complex(-k)));
  };
  return m;
}

std::vector<double> det_arg_branch(const std::vector<SMatrixSample>& samples, int n_D) {
  if (samples.empty()) return {};
  std::vector<double> theta(samples.size());
  theta[0] = principal_arg_det(samples[0].S);
  double prev_raw = theta[0];
  for (size_t i = 1; i < samples.size(); ++i) {
    const double raw = principal_arg_det(samples[i].S);
    const double inc = wrap_pi(raw - prev_raw);
    if (std::abs(inc) >= kPi / 2)
      throw BranchJump("arg det S increment too large between neighbouring k samples");
    theta[i] = theta[i - 1] + inc;
    prev_raw = raw;
  }
  // Pin the branch: shift by 2 pi j so the largest-k value is near -pi n_D.
  const double target = -kPi * n_D;
  const double j = std::round((target - theta.back()) / (2 * kPi));
  for (double& t : theta) t += 2 * kPi * j;
  return theta;
}

ArgBranch track_det_arg(const std::function<SMatrixSample(double)>& eval,
                        std::vector<double> kgrid, int n_D) {
  std::sort(kgrid.begin(), kgrid.end());
  kgrid.erase(std::unique(kgrid.begin(), kgrid.end()), kgrid.end());
  if (kgrid.empty()) return {};

  struct Node {
    double k;
    SMatrixSample s;
    double raw;
    int depth;
  };
  std::vector<Node> nodes;
  nodes.reserve(kgrid.size());
  for (double k : kgrid) {
    SMatrixSample s = eval(k);
    const double raw = principal_arg_det(s.S);
    nodes.push_back({k, std::move(s), raw, 0});
  }
  // Bisect intervals with large phase increments.
  for (size_t i = 0; i + 1 < nodes.size();) {
    const double inc = wrap_pi(nodes[i + 1].raw - nodes[i].raw);
    if (std::abs(inc) < kPi / 2) {
      ++i;
      continue;
    }
    const int depth = std::max(nodes[i].depth, nodes[i + 1].depth) + 1;
    if (depth > 20) throw BranchJump("arg det S increment persists after max bisection depth");
    const double km = 0.5 * (nodes[i].k + nodes[i + 1].k);
    SMatrixSample s = eval(km);
    const double raw = principal_arg_det(s.S);
    nodes.insert(nodes.begin() + static_cast<long>(i) + 1, {km, std::move(s), raw, depth});
  }

  ArgBranch out;
  out.samples.reserve(nodes.size());
  for (auto& nd : nodes) out.samples.push_back(std::move(nd.s));
  out.theta = det_arg_branch(out.samples, n_D);
  return out;
}

double born_identity_defect(const PotentialSpec& p, const BoundaryPair& bp, double k,
                            const Tolerances& tol) {
  const SMatrixSample s = p.is_zero() ? free_smatrix(bp, k, tol)
                                      : scattering_matrix(p, bp, k, tol);
  const SMatrixSample s0 = free_smatrix(bp, k, tol);
  if (p.is_zero()) return (s.S - s0.S).norm();

  std::vector<double> grid, w;
  gauss_nodes(p, std::abs(k), grid, w);
  const WaveSolutionSample psi = physical_solution(p, bp, k, grid, tol);
  const WaveSolutionSample psi0 = free_physical(bp, k, grid, tol);
  Mat acc = Mat::Zero(bp.n, bp.n);
  for (size_t i = 0; i < grid.size(); ++i)
    acc += w[i] * (psi0.values[i] * (p.eval(grid[i]) * psi.values[i]));
  return (s.S - s0.S + (2.0 * kI / k) * acc).norm();
}

}  // namespace hl
