#pragma once

#include <functional>
#include <vector>

#include "hl/potential.hpp"
#include "hl/types.hpp"

namespace hl {

struct OdeOptions {
  double rel = 1e-10;
  double abs = 1e-12;
  long max_steps = 4'000'000;
};

/// Integrates the matrix equation psi'' = (V(x) - k^2) psi with a Dormand-
/// Prince 5(4) adaptive stepper from x0 (state psi, dpsi) through the sorted
/// output points (monotone from x0; last one is the integration target).
/// Potential breakpoints inside the span are forced step boundaries. emit is
/// called once per output point with the state there.
void integrate_schrodinger(const PotentialSpec& p, Complex k, double x0, Mat psi, Mat dpsi,
                           const std::vector<double>& outputs,
                           const std::function<void(size_t, const Mat&, const Mat&)>& emit,
                           const OdeOptions& opt = {});

/// Exact zero-potential propagation of (psi, dpsi) from a to b.
void free_propagate(Complex k, double a, double b, Mat& psi, Mat& dpsi);

}  // namespace hl
