#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hl/errors.hpp"
#include "hl/grid.hpp"
#include "hl/potential.hpp"
#include "test_util.hpp"

using namespace hl;

TEST_CASE("zero potential validates to all-zero functionals") {
  const auto rep = PotentialSpec::zero(2).validate();
  CHECK(rep.hermiticity_defect == 0.0);
  CHECK(rep.l1_norm == 0.0);
  CHECK(rep.first_moment == 0.0);
}

TEST_CASE("square well L1 norm and first moment are exact") {
  const auto rep = PotentialSpec::square_well(1, 2.0, 1.0).validate();
  CHECK(rep.l1_norm == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.first_moment == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-Hermitian samples are rejected") {
  Mat bad(2, 2);
  bad << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(1, 0);  // symmetric, not Hermitian
  const auto p = PotentialSpec::sampled({0.0, 1.0}, {bad, bad});
  CHECK_THROWS_AS(p.validate(), NonHermitian);
}

TEST_CASE("malformed models are rejected") {
  CHECK_THROWS_AS(PotentialSpec::piecewise({1.0, 0.5}, {Mat::Identity(1, 1), Mat::Identity(1, 1)}),
                  ConfigError);
  CHECK_THROWS_AS(PotentialSpec::piecewise({1.0}, {Mat::Identity(1, 1), Mat::Identity(1, 1)}),
                  DimensionMismatch);
  Mat nf = Mat::Identity(1, 1);
  nf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(PotentialSpec::sampled({0.0, 1.0}, {nf, nf}), NonFinite);
}

TEST_CASE("square well Q2 matches the elementary antiderivative") {
  const double V0 = 2.0, a = 1.5;
  const auto md = PotentialSpec::square_well(1, V0, a).moments();
  for (double k : {0.3, 1.0, 4.0}) {
    const Complex want = -(V0 / 2.0) * (std::exp(2.0 * kI * k * a) - 1.0) / (2.0 * kI * k);
    CHECK(std::abs(md.Q2(Complex(k, 0))(0, 0) - want) <= 1e-12 * std::abs(want));
  }
  CHECK(std::abs(md.Q1(0, 0) - (-V0 * a / 2.0)) <= 1e-12);
}

TEST_CASE("Q2(0) equals Q1 for every builtin") {
  std::mt19937_64 rng(3);
  const Mat C = hltest::random_hermitian(2, rng);
  const std::vector<PotentialSpec> ps{
      PotentialSpec::square_well(2, 1.3, 0.7), PotentialSpec::square_well_matrix(C, 1.2),
      PotentialSpec::exp_decay(C, 2.0),        PotentialSpec::coupled_well(1.0, 2.0, 0.3, 1.0)};
  for (const auto& p : ps) {
    const auto md = p.moments();
    CHECK((md.Q2(Complex(0, 0)) - md.Q1).norm() <= 1e-10 * (1.0 + md.Q1.norm()));
  }
}

TEST_CASE("moments against direct quadrature on a piecewise model") {
  Mat V1(1, 1), V2(1, 1);
  V1 << -3.0;
  V2 << 1.5;
  const auto p = PotentialSpec::piecewise({0.8, 2.0}, {V1, V2});
  const auto md = p.moments();
  const Complex k(0.7, 0.0);
  // per-piece antiderivative of e^{2iky}
  auto seg = [&](double a, double b) {
    return (std::exp(2.0 * kI * k * b) - std::exp(2.0 * kI * k * a)) / (2.0 * kI * k);
  };
  const Complex want = 0.5 * (V1(0, 0) * seg(0.0, 0.8) + V2(0, 0) * seg(0.8, 2.0));
  CHECK(std::abs(md.Q2(k)(0, 0) - want) <= 1e-12);
}

TEST_CASE("conjugation covariance of the moments and norms") {
  std::mt19937_64 rng(5);
  const Mat C = hltest::random_hermitian(3, rng);
  const Mat M = hltest::random_unitary(3, rng);
  const auto p = PotentialSpec::exp_decay(C, 1.0);
  const auto pc = p.conjugated(M);
  CHECK((pc.moments().Q1 - M * p.moments().Q1 * M.adjoint()).norm() <= 1e-12 * C.norm());
  CHECK(pc.validate().l1_norm == doctest::Approx(p.validate().l1_norm).epsilon(1e-10));
}

TEST_CASE("support is numerically compact") {
  const auto p = PotentialSpec::exp_decay(Mat::Identity(1, 1), 1.0, 1e-12);
  CHECK(p.eval(p.support_end()).norm() == 0.0);
  CHECK(p.eval(p.support_end() + 1.0).norm() == 0.0);
  CHECK(p.eval(0.0).norm() > 0.0);
  // truncation keeps the stated L1 tail mass
  CHECK(std::exp(-p.support_end()) <= 2e-12);
}
