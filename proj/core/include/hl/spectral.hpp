#pragma once

#include <vector>

#include "hl/bc.hpp"
#include "hl/grid.hpp"
#include "hl/potential.hpp"
#include "hl/scattering.hpp"
#include "hl/types.hpp"

namespace hl {

/// Eigenvalue E = -kappa^2 of the half-line operator; vectors spans the
/// numerical null space of J(i kappa) (one column per multiplicity).
struct BoundState {
  double E = 0;
  double kappa = 0;
  int m = 0;
  Mat vectors;  // n x m, orthonormal columns
};

/// All roots of det J(i kappa) in [kappa_min, kappa_max]: log-spaced scan,
/// sign-change bracketing of the phase-rotated determinant with bisection,
/// |det| minima as fallback for even multiplicities.
std::vector<BoundState> bound_states(const PotentialSpec& p, const BoundaryPair& bp,
                                     double kappa_min, double kappa_max,
                                     const Tolerances& tol = {}, int scan_points = 400);

/// Second-order finite-difference / lumped-mass discretization of the
/// quadratic form on [0, x_max]: kinetic part, potential part, and the vertex
/// term -<cot(theta) phi(0), phi(0)> in the rotated frame, with Dirichlet
/// channels eliminated at the origin and a Dirichlet cap at x_max. Used as an
/// independent oracle for bound states, transforms, and the trace formula.
class DiscreteHamiltonian {
 public:
  DiscreteHamiltonian(const PotentialSpec& p, const BoundaryPair& bp, double h, double x_max,
                      const Tolerances& tol = {});

  long size() const { return size_; }
  int channels() const { return n_; }
  double step() const { return h_; }
  /// Node abscissas carrying unknowns (0, h, ..., x_max - h).
  const std::vector<double>& grid() const { return grid_; }

  /// Sum over eigenvalues of 1/(E_i - z) for real z below the spectrum,
  /// computed exactly (for the discrete operator) by block elimination.
  double resolvent_trace(double z) const;

  struct Mode {
    double E = 0;
    GridFunction psi;  // original frame, Dirichlet zeros reinserted, L2-normalized
  };
  /// Lowest eigenpair by shifted inverse iteration with Rayleigh updates.
  Mode ground_state() const;
  /// Eigenpairs with E < E_max, lowest first, at most max_count (deflated
  /// inverse iteration).
  std::vector<Mode> modes_below(double E_max, int max_count = 8) const;

  /// y = H u for a function sampled on grid() in the original frame. The
  /// components of u(0) in eliminated Dirichlet channels are ignored.
  GridFunction apply(const GridFunction& u) const;

 private:
  Vec solve_shifted(double sigma, const Vec& b) const;  // (K - sigma D) x = b
  double rayleigh(const Vec& u) const;
  long count_below(double z) const;  // Sylvester inertia of K - z D
  Mode iterate(double sigma, const std::vector<Vec>& deflate) const;
  Vec mass_apply(const Vec& u) const;
  GridFunction to_grid_function(const Vec& u) const;

  Vec pack(const GridFunction& f) const;  // original frame -> internal layout
  Vec k_apply(const Vec& u) const;

  int n_ = 0, n_D_ = 0, red_ = 0;  // red_ = n - n_D, node-0 block size
  long nodes_ = 0, size_ = 0;
  double h_ = 0;
  Mat M_;           // frame rotation from the normal form
  RVec cot_;        // vertex coefficients per rotated channel
  Mat R_;           // red_ x n selection of non-Dirichlet channels at node 0
  std::vector<int> keep_;
  std::vector<double> grid_;
  std::vector<Mat> diag_;   // rotated-frame diagonal blocks of K
  Tolerances tol_;
};

struct SsfSample {
  double E = 0;
  double xi = 0;
};

struct SsfResult {
  std::vector<SsfSample> samples;
  std::vector<BoundState> bound;
  int n_D = 0;
};

/// Spectral shift function against the free Neumann comparison operator:
/// counting step function below zero, -Theta(sqrt(E)) / (2 pi) above.
SsfResult ssf(const PotentialSpec& p, const BoundaryPair& bp, const std::vector<double>& E_grid,
              const Tolerances& tol = {});

struct LevinsonReport {
  double xi0_plus = 0;  // branch value extrapolated to k = 0+
  int n = 0;
  int mu = 0;  // multiplicity of eigenvalue +1 of S(0)
  int N = 0;   // bound states with multiplicity
  double defect = 0;
  Mat S0;      // extrapolated S(0)
};

/// xi(0+) = (n - mu)/2 - N; reports the ingredients and the residual defect.
LevinsonReport levinson_check(const PotentialSpec& p, const BoundaryPair& bp,
                              const Tolerances& tol = {});

struct TraceReport {
  double lhs = 0;
  double rhs = 0;
  double defect = 0;  // relative
};

/// Tr[f(H) - f(H0)] = int xi(E) f'(E) dE for f(E) = 1/(E + c), c above the
/// lowest eigenvalue in magnitude. Left side from the discrete oracle
/// resolvent traces, right side from bound states plus the tracked branch.
TraceReport trace_formula_check(const PotentialSpec& p, const BoundaryPair& bp, double c = 1.0,
                                double h = 1e-3, double x_max = 200.0,
                                const Tolerances& tol = {});

}  // namespace hl
