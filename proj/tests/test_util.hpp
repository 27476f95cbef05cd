#pragma once

#include <random>
#include <vector>

#include <Eigen/QR>

#include "hl/bc.hpp"
#include "hl/types.hpp"

namespace hltest {

inline hl::Mat random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  hl::Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = hl::Complex(g(rng), g(rng));
  return m;
}

inline hl::Mat random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<hl::Mat> qr(random_complex(n, rng));
  hl::Mat Q = qr.householderQ() * hl::Mat::Identity(n, n);
  // fix the phase of the R diagonal for determinism of the distribution
  hl::Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const hl::Complex d = R(j, j);
    if (std::abs(d) > 0) Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

inline hl::Mat random_hermitian(int n, std::mt19937_64& rng) {
  const hl::Mat m = random_complex(n, rng);
  return 0.5 * (m + m.adjoint());
}

/// Invertible T with singular values in [1, cap]: controlled condition number.
inline hl::Mat random_invertible(int n, std::mt19937_64& rng, double cap = 100.0) {
  std::uniform_real_distribution<double> u(1.0, cap);
  hl::Mat D = hl::Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) D(j, j) = u(rng);
  return random_unitary(n, rng) * D * random_unitary(n, rng);
}

/// Random valid boundary pair built through the diagonal normal form.
inline hl::BoundaryPair random_bc(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hl::NormalForm nf;
  nf.M = random_unitary(n, rng);
  nf.T2 = hl::Mat::Identity(n, n);
  nf.T1 = random_invertible(n, rng, 10.0);
  for (int j = 0; j < n; ++j) {
    const double r = u(rng);
    double theta;
    if (r < 0.2)
      theta = hl::kPi;  // Dirichlet
    else if (r < 0.4)
      theta = hl::kPi / 2;  // Neumann
    else
      theta = 0.1 + 0.8 * hl::kPi * u(rng);
    nf.thetas.push_back(theta);
  }
  return hl::reconstruct(nf);
}

}  // namespace hltest
