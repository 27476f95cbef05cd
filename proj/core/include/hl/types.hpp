#pragma once

#include <complex>
#include <Eigen/Dense>

namespace hl {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Numerical knobs shared across the library. All overridable from config.
struct Tolerances {
  double herm_rel = 1e-10;       // Hermiticity defect of A^dag B, relative
  double posdef_rel = 1e-12;     // smallest eigenvalue of A^dag A + B^dag B, relative
  double unitarity = 1e-10;      // unitarity defect of derived unitaries
  double cluster = 1e-8;         // eigenvalue-cluster separation warning
  double theta_class = 1e-9;     // classifying theta as pi/2 or pi
  double cond_max = 1e12;        // condition-number guard for linear solves
  double ode_rel = 1e-10;        // ODE relative tolerance
  double ode_abs = 1e-12;        // ODE absolute tolerance
  double s_unitarity = 1e-8;     // accepted unitarity defect of S(k)
  double null_space = 1e-6;      // singular-value gap ratio for null-space dim
  double root = 1e-12;           // root refinement tolerance (relative in kappa)
  double eig_plus_one = 1e-3;    // eigenvalue-of-S(0) distance to +1 counting mu
  double extrap = 1e-2;          // small-k extrapolation consistency
  double k_min = 0.05;           // default smallest k for k-side grids
};

inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline double herm_defect(const Mat& m) { return (m - m.adjoint()).norm(); }

}  // namespace hl
