#pragma once

#include <functional>
#include <vector>

#include "hl/bc.hpp"
#include "hl/potential.hpp"
#include "hl/solutions.hpp"
#include "hl/types.hpp"

namespace hl {

struct SMatrixSample {
  double k = 0;
  Mat S;
  double unitarity_defect = 0;
};

struct HighEnergyModel {
  Mat S_inf;
  std::function<Mat(double)> G;
  /// S_inf + G(k)/(ik), the first-order large-k model.
  Mat eval(double k) const { return S_inf + G(k) / (kI * k); }
};

/// J(k) = f(-k*, 0)^dag B - f'(-k*, 0)^dag A from a backward solve.
Mat jost_matrix(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                const Tolerances& tol = {});

/// Same matrix via the Wronskian [f(-k*, .)^dag; phi(k, .)] at x = 0.
Mat jost_matrix_wronskian(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                          const Tolerances& tol = {});

/// Same matrix via J0(k) + int_0^inf e^{ikx} V(x) phi(k, x) dx, Simpson
/// quadrature on the ODE output grid.
Mat jost_matrix_integral(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                         const Tolerances& tol = {});

/// S(k) = -J(-k) J(k)^{-1} for real k != 0 (linear solve, no explicit
/// inverse). Stored for k > 0; S(-k) = S(k)^dag.
SMatrixSample scattering_matrix(const PotentialSpec& p, const BoundaryPair& bp, double k,
                                const Tolerances& tol = {});

/// Zero-potential closed forms (no ODE solve).
Mat free_jost(const BoundaryPair& bp, Complex k);
SMatrixSample free_smatrix(const BoundaryPair& bp, double k, const Tolerances& tol = {});
/// phi0(k, x) = A cos kx + B sin(kx)/k.
WaveSolutionSample free_regular(const BoundaryPair& bp, Complex k,
                                const std::vector<double>& grid);
/// psi0(k, x) = (1/2)(e^{-ikx} I + e^{ikx} S0(k)).
WaveSolutionSample free_physical(const BoundaryPair& bp, double k,
                                 const std::vector<double>& grid, const Tolerances& tol = {});

/// Large-k model S(k) = S_inf + G(k)/(ik) + O(1/k^2) built from the diagonal
/// normal form and the potential moments.
HighEnergyModel high_energy_model(const PotentialSpec& p, const BoundaryPair& bp,
                                  const Tolerances& tol = {});

/// Continuous branch of arg det S over samples sorted by increasing k,
/// pinned so the largest-k value lies within pi of -pi * n_D. Requires
/// increments below pi/2 between neighbours (BranchJump otherwise).
std::vector<double> det_arg_branch(const std::vector<SMatrixSample>& samples, int n_D);

/// Adaptive version: evaluates S on kgrid, bisects intervals whose phase
/// increment reaches pi/2 (max depth 20), then unwraps. Returns the refined
/// samples and the branch values.
struct ArgBranch {
  std::vector<SMatrixSample> samples;
  std::vector<double> theta;
};
ArgBranch track_det_arg(const std::function<SMatrixSample(double)>& eval,
                        std::vector<double> kgrid, int n_D);

/// || S(k) - S0(k) + (2i/k) int psi0 V psi dx ||.
double born_identity_defect(const PotentialSpec& p, const BoundaryPair& bp, double k,
                            const Tolerances& tol = {});

}  // namespace hl
