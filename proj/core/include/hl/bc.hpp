#pragma once

#include <vector>

#include "hl/types.hpp"

namespace hl {

/// The vertex condition -B^dag psi(0) + A^dag psi'(0) = 0.
struct BoundaryPair {
  int n = 0;
  Mat A;
  Mat B;
};

struct ValidationReport {
  bool ok = false;
  double hermiticity_defect = 0;  // ||A^dag B - (A^dag B)^dag||
  double min_eig = 0;             // smallest eigenvalue of A^dag A + B^dag B
};

/// Diagonal normal form A = M Atilde T2 M^dag T1, B = M Btilde T2 M^dag T1
/// with Atilde = -diag(sin theta), Btilde = diag(cos theta).
/// Ordering: mixed channels first (theta ascending), then Dirichlet (pi),
/// then Neumann (pi/2).
struct NormalForm {
  Mat M;                       // unitary
  std::vector<double> thetas;  // in (0, pi]
  Mat T1, T2;                  // invertible; T2 = I is the canonical split
  int n_M = 0, n_D = 0, n_N = 0;
  bool near_degenerate = false;  // eigenvalue clusters closer than tol
  double min_gap = 0;            // smallest separation between distinct clusters
};

ValidationReport validate_bc(const Mat& A, const Mat& B, const Tolerances& tol = {});

BoundaryPair make_bc(const Mat& A, const Mat& B, const Tolerances& tol = {});

NormalForm normal_form(const BoundaryPair& bp, const Tolerances& tol = {});

/// Rebuild (A, B) from a normal form; inverse of normal_form up to the
/// non-uniqueness of the (T1, T2) split.
BoundaryPair reconstruct(const NormalForm& nf);

BoundaryPair transform_bc(const BoundaryPair& bp, const Mat& T, const Tolerances& tol = {});

BoundaryPair conjugate_bc(const BoundaryPair& bp, const Mat& M, const Tolerances& tol = {});

/// Sorted multiset of thetas, the similarity invariant of the vertex condition.
std::vector<double> classify(const BoundaryPair& bp, const Tolerances& tol = {});

// Canonical built-in pairs.
BoundaryPair dirichlet_bc(int n);
BoundaryPair neumann_bc(int n);
BoundaryPair kirchhoff_bc(int n);
/// Diagonal pair (Atilde, Btilde) from angles in (0, pi].
BoundaryPair bc_from_thetas(const std::vector<double>& thetas);

/// The diagonal matrix of cot(theta_j) for mixed channels, 0 for Dirichlet and
/// Neumann ones; the vertex term of the quadratic form.
RVec cot_hat(const NormalForm& nf);

}  // namespace hl
