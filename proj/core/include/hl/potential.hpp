#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hl/types.hpp"

namespace hl {

/// Self-adjoint matrix potential on (0, inf) with compact numeric support.
/// Models:
///   - Piecewise: constant Hermitian matrix per cell, zero beyond the last
///     breakpoint.
///   - Sampled: linear interpolation between Hermitian samples, zero beyond
///     the grid.
///   - Builtin families (square_well, exp_decay, coupled_well): a scalar
///     profile times a constant Hermitian coupling matrix. Decaying analytic
///     profiles are truncated where the remaining L1 mass drops below
///     tail_mass.
class PotentialSpec {
 public:
  enum class Model { Piecewise, Sampled, Builtin };
  enum class Family { SquareWell, ExpDecay, CoupledWell };

  static PotentialSpec zero(int n);
  static PotentialSpec piecewise(std::vector<double> breakpoints, std::vector<Mat> values);
  static PotentialSpec sampled(std::vector<double> grid, std::vector<Mat> values);
  /// V(x) = -depth * I_n on [0, width].
  static PotentialSpec square_well(int n, double depth, double width);
  /// V(x) = C * profile on [0, width] for a Hermitian coupling matrix C.
  static PotentialSpec square_well_matrix(const Mat& C, double width);
  /// V(x) = C * exp(-rate x), truncated at L1 tail mass tail_mass.
  static PotentialSpec exp_decay(const Mat& C, double rate, double tail_mass = 1e-12);
  /// n = 2 well [[-d1, c], [c, -d2]] on [0, width].
  static PotentialSpec coupled_well(double d1, double d2, double c, double width);

  int channels() const { return n_; }
  Model model() const { return model_; }
  Family family() const { return family_; }
  bool is_zero() const;
  /// End of numeric support; V(x) = 0 exactly for x >= support_end().
  double support_end() const { return support_end_; }
  /// Interior points where smoothness may break (forced integrator stops).
  const std::vector<double>& stops() const { return stops_; }

  Mat eval(double x) const;

  /// Unitary change of representation V -> M V M^dag.
  PotentialSpec conjugated(const Mat& M) const;

  struct Report {
    double hermiticity_defect;
    double l1_norm;        // int ||V|| dx
    double first_moment;   // int x ||V|| dx
  };
  Report validate(const Tolerances& tol = {}) const;

  struct MomentData {
    Mat Q1;                               // (1/2) int V
    std::function<Mat(Complex)> Q2;       // (1/2) int e^{2iky} V(y) dy
  };
  MomentData moments() const;

 private:
  PotentialSpec() = default;
  int n_ = 0;
  Model model_ = Model::Piecewise;
  Family family_ = Family::SquareWell;
  // Piecewise / Sampled data
  std::vector<double> xs_;    // cell boundaries (piecewise) or sample grid
  std::vector<Mat> vals_;
  // Builtin data
  Mat coupling_;
  double rate_ = 0;
  double support_end_ = 0;
  std::vector<double> stops_;

  friend struct PotentialIO;
};

}  // namespace hl
