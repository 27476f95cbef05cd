#pragma once

#include <vector>

#include "hl/bc.hpp"
#include "hl/ode.hpp"
#include "hl/potential.hpp"
#include "hl/types.hpp"

namespace hl {

/// A matrix-valued solution of -psi'' + V psi = k^2 psi sampled on a grid.
struct WaveSolutionSample {
  Complex k;
  std::vector<double> grid;
  std::vector<Mat> values;
  std::vector<Mat> derivs;

  /// Entrywise adjoint of values and derivatives (the dagger convention used
  /// by the Wronskian identities).
  WaveSolutionSample adjoint() const;
};

/// Jost solution f(k, x) ~ e^{ikx} I at infinity; Im k >= 0, k != 0.
/// Exact beyond the potential support, backward-integrated inside it.
WaveSolutionSample jost_solution(const PotentialSpec& p, Complex k,
                                 const std::vector<double>& grid, const Tolerances& tol = {});

/// Second solution g(k, x) ~ e^{-ikx} I at infinity.
WaveSolutionSample second_solution(const PotentialSpec& p, Complex k,
                                   const std::vector<double>& grid, const Tolerances& tol = {});

/// Regular solution with phi(k, 0) = A, phi'(k, 0) = B.
WaveSolutionSample regular_solution(const PotentialSpec& p, const BoundaryPair& bp, Complex k,
                                    const std::vector<double>& grid, const Tolerances& tol = {});

/// Physical solution (1/2) f(-k, x) + (1/2) f(k, x) S(k) for real k != 0.
WaveSolutionSample physical_solution(const PotentialSpec& p, const BoundaryPair& bp, double k,
                                     const std::vector<double>& grid, const Tolerances& tol = {});

/// [F; G] = F G' - F' G at grid index i. Apply .adjoint() to the first
/// argument for the daggered identities.
Mat wronskian(const WaveSolutionSample& F, const WaveSolutionSample& G, size_t i);

/// Max finite-difference residual of -psi'' + V psi - k^2 psi over interior
/// grid points (columnwise, relative to the local solution size).
double ode_residual(const WaveSolutionSample& s, const PotentialSpec& p);

}  // namespace hl
