#include "hl/bc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hl/errors.hpp"

namespace hl {

ValidationReport validate_bc(const Mat& A, const Mat& B, const Tolerances& tol) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() < 1)
    throw DimensionMismatch("A and B must be square with equal dimension n >= 1");
  if (!all_finite(A) || !all_finite(B)) throw NonFinite("A or B contains a non-finite entry");

  ValidationReport r;
  const Mat AdB = A.adjoint() * B;
  r.hermiticity_defect = herm_defect(AdB);
  const Mat P = A.adjoint() * A + B.adjoint() * B;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (P + P.adjoint()));
  r.min_eig = es.eigenvalues().minCoeff();
  const double herm_ok = r.hermiticity_defect <= tol.herm_rel * std::max(1.0, AdB.norm());
  const double pd_ok = r.min_eig > tol.posdef_rel * es.eigenvalues().maxCoeff();
  r.ok = herm_ok && pd_ok;
  return r;
}

BoundaryPair make_bc(const Mat& A, const Mat& B, const Tolerances& tol) {
  auto rep = validate_bc(A, B, tol);
  if (!rep.ok) throw InvalidBC("pair fails self-adjointness conditions");
  return BoundaryPair{static_cast<int>(A.rows()), A, B};
}

namespace {

// theta in (0, pi] from an eigenvalue lambda = -exp(-2 i theta) of the free
// scattering matrix at k = 1.
double theta_from_eig(Complex lambda) {
  const double phi = std::arg(-lambda);  // in (-pi, pi]
  double theta = -phi / 2;               // in [-pi/2, pi/2)
  if (theta <= 0) theta += kPi;
  return theta;
}

enum class Channel { Mixed = 0, Dirichlet = 1, Neumann = 2 };

Channel channel_of(double theta, double tol) {
  // theta = pi and theta -> 0+ both mean lambda = -1 (Dirichlet); the chart
  // (0, pi] puts perturbations of -1 on either end.
  if (std::abs(theta - kPi) <= tol || theta <= tol) return Channel::Dirichlet;
  if (std::abs(theta - kPi / 2) <= tol) return Channel::Neumann;
  return Channel::Mixed;
}

}  // namespace

NormalForm normal_form(const BoundaryPair& bp, const Tolerances& tol) {
  if (!validate_bc(bp.A, bp.B, tol).ok) throw InvalidBC("normal_form requires a valid pair");
  const int n = bp.n;
  const Mat BmiA = bp.B - kI * bp.A;
  Eigen::PartialPivLU<Mat> lu(BmiA);
  if (lu.rcond() < 1.0 / tol.cond_max)
    throw InvalidBC("B - iA numerically singular; input is not a valid float pair");
  const Mat U = -(bp.B + kI * bp.A) * lu.inverse();
  if ((U.adjoint() * U - Mat::Identity(n, n)).norm() > tol.unitarity * n)
    throw InvalidBC("free scattering matrix at k=1 failed unitarity check");

  // U is normal, so its Schur form is diagonal and the Schur basis is a
  // unitary eigenvector matrix.
  Eigen::ComplexSchur<Mat> schur(U);
  Mat M = schur.matrixU();
  std::vector<double> thetas(n);
  for (int j = 0; j < n; ++j) thetas[j] = theta_from_eig(schur.matrixT()(j, j));

  // Order: mixed (theta ascending), Dirichlet, Neumann; degenerate clusters
  // tie-broken by the lexicographic order of eigenvector leading entries.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto lex_less = [&](int a, int b) {
    for (int r = 0; r < n; ++r) {
      const Complex x = M(r, a), y = M(r, b);
      if (std::abs(x.real() - y.real()) > 1e-12) return x.real() < y.real();
      if (std::abs(x.imag() - y.imag()) > 1e-12) return x.imag() < y.imag();
    }
    return false;
  };
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const auto ca = channel_of(thetas[a], tol.theta_class);
    const auto cb = channel_of(thetas[b], tol.theta_class);
    if (ca != cb) return static_cast<int>(ca) < static_cast<int>(cb);
    if (std::abs(thetas[a] - thetas[b]) > tol.theta_class) return thetas[a] < thetas[b];
    return lex_less(a, b);
  });

  NormalForm nf;
  nf.M = Mat(n, n);
  nf.thetas.resize(n);
  for (int j = 0; j < n; ++j) {
    nf.M.col(j) = M.col(idx[j]);
    nf.thetas[j] = thetas[idx[j]];
    switch (channel_of(nf.thetas[j], tol.theta_class)) {
      case Channel::Mixed: ++nf.n_M; break;
      case Channel::Dirichlet: nf.thetas[j] = kPi; ++nf.n_D; break;
      case Channel::Neumann: nf.thetas[j] = kPi / 2; ++nf.n_N; break;
    }
  }

  // Cluster-separation diagnostic on the unit circle.
  nf.min_gap = 4.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double d = std::abs(std::polar(1.0, -2 * nf.thetas[a]) - std::polar(1.0, -2 * nf.thetas[b]));
      if (d > tol.theta_class && d < nf.min_gap) nf.min_gap = d;
    }
  nf.near_degenerate = nf.min_gap < tol.cluster;

  // A = M Atilde W, B = M Btilde W with W = Atilde M^dag A + Btilde M^dag B
  // (exact because Atilde^2 + Btilde^2 = I). Canonical split: T2 = I.
  Mat At = Mat::Zero(n, n), Bt = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    At(j, j) = -std::sin(nf.thetas[j]);
    Bt(j, j) = std::cos(nf.thetas[j]);
  }
  const Mat W = At * nf.M.adjoint() * bp.A + Bt * nf.M.adjoint() * bp.B;
  nf.T2 = Mat::Identity(n, n);
  nf.T1 = nf.M * W;

  const BoundaryPair back = reconstruct(nf);
  const double scale = std::max(bp.A.norm(), bp.B.norm());
  if ((back.A - bp.A).norm() + (back.B - bp.B).norm() > 1e-8 * std::max(1.0, scale))
    throw InvalidBC("normal form reconstruction failed verification");
  return nf;
}

BoundaryPair reconstruct(const NormalForm& nf) {
  const int n = static_cast<int>(nf.thetas.size());
  Mat At = Mat::Zero(n, n), Bt = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    At(j, j) = -std::sin(nf.thetas[j]);
    Bt(j, j) = std::cos(nf.thetas[j]);
  }
  BoundaryPair bp;
  bp.n = n;
  bp.A = nf.M * At * nf.T2 * nf.M.adjoint() * nf.T1;
  bp.B = nf.M * Bt * nf.T2 * nf.M.adjoint() * nf.T1;
  return bp;
}

BoundaryPair transform_bc(const BoundaryPair& bp, const Mat& T, const Tolerances& tol) {
  if (T.rows() != bp.n || T.cols() != bp.n) throw DimensionMismatch("T has wrong shape");
  Eigen::PartialPivLU<Mat> lu(T);
  if (lu.rcond() < 1.0 / tol.cond_max) throw SingularT("T is numerically singular");
  return make_bc(bp.A * T, bp.B * T, tol);
}

BoundaryPair conjugate_bc(const BoundaryPair& bp, const Mat& M, const Tolerances& tol) {
  if (M.rows() != bp.n || M.cols() != bp.n) throw DimensionMismatch("M has wrong shape");
  if ((M.adjoint() * M - Mat::Identity(bp.n, bp.n)).norm() > tol.unitarity * bp.n * 10)
    throw NotUnitary("M is not unitary to tolerance");
  return make_bc(M * bp.A * M.adjoint(), M * bp.B * M.adjoint(), tol);
}

std::vector<double> classify(const BoundaryPair& bp, const Tolerances& tol) {
  auto t = normal_form(bp, tol).thetas;
  std::sort(t.begin(), t.end());
  return t;
}

BoundaryPair dirichlet_bc(int n) {
  return {n, Mat::Zero(n, n), Mat::Identity(n, n)};
}

BoundaryPair neumann_bc(int n) {
  return {n, -Mat::Identity(n, n), Mat::Zero(n, n)};
}

BoundaryPair kirchhoff_bc(int n) {
  // Continuity of the wavefunction plus current conservation at the vertex.
  Mat Ad = Mat::Zero(n, n), Bd = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    Bd(i, i) = 1;
    Bd(i, i + 1) = -1;
  }
  Ad.row(n - 1).setOnes();
  return {n, Ad.adjoint(), Bd.adjoint()};
}

BoundaryPair bc_from_thetas(const std::vector<double>& thetas) {
  const int n = static_cast<int>(thetas.size());
  Mat A = Mat::Zero(n, n), B = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    A(j, j) = -std::sin(thetas[j]);
    B(j, j) = std::cos(thetas[j]);
  }
  return {n, A, B};
}

RVec cot_hat(const NormalForm& nf) {
  const int n = static_cast<int>(nf.thetas.size());
  RVec c = RVec::Zero(n);
  for (int j = 0; j < nf.n_M; ++j) c[j] = 1.0 / std::tan(nf.thetas[j]);
  return c;
}

}  // namespace hl
