#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "hl/bc.hpp"
#include "hl/errors.hpp"
#include "test_util.hpp"

using namespace hl;
using hltest::random_bc;
using hltest::random_invertible;
using hltest::random_unitary;

TEST_CASE("validate_bc canonical pairs") {
  const Mat Z = Mat::Zero(2, 2), I = Mat::Identity(2, 2);
  CHECK(validate_bc(Z, I).ok);                       // Dirichlet
  CHECK(validate_bc(I, I).ok);
  CHECK_FALSE(validate_bc(I, kI * I).ok);            // A^dag B = iI non-Hermitian
  CHECK_FALSE(validate_bc(Z, Z).ok);                 // A^dag A + B^dag B = 0
}

TEST_CASE("validate_bc rejects malformed input") {
  CHECK_THROWS_AS(validate_bc(Mat::Zero(2, 2), Mat::Identity(3, 3)), DimensionMismatch);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_bc(bad, Mat::Identity(2, 2)), NonFinite);
  CHECK_THROWS_AS(make_bc(Mat::Identity(2, 2), kI * Mat::Identity(2, 2)), InvalidBC);
}

TEST_CASE("normal form of the canonical pairs") {
  const NormalForm d = normal_form(dirichlet_bc(3));
  CHECK(d.n_D == 3);
  for (double th : d.thetas) CHECK(th == doctest::Approx(kPi).epsilon(1e-12));

  BoundaryPair neu = neumann_bc(3);  // A = -I, B = 0
  const NormalForm n = normal_form(neu);
  CHECK(n.n_N == 3);
  for (double th : n.thetas) CHECK(th == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("normal form recovers forward-constructed angles") {
  std::mt19937_64 rng(7);
  const std::vector<double> want{kPi / 3, kPi, kPi / 2};
  NormalForm fwd;
  fwd.M = random_unitary(3, rng);
  fwd.T2 = Mat::Identity(3, 3);
  fwd.T1 = random_invertible(3, rng, 5.0);
  fwd.thetas = want;
  const BoundaryPair bp = reconstruct(fwd);
  std::vector<double> got = classify(bp);
  std::vector<double> sorted_want = want;
  std::sort(sorted_want.begin(), sorted_want.end());
  REQUIRE(got.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(sorted_want[i]).epsilon(1e-10));
}

TEST_CASE("reconstruct(normal_form) reproduces the pair") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2, 3, 4}) {
    for (int rep = 0; rep < 5; ++rep) {
      const BoundaryPair bp = random_bc(n, rng);
      const NormalForm nf = normal_form(bp);
      const BoundaryPair back = reconstruct(nf);
      const double scale = bp.A.norm() + bp.B.norm();
      CHECK((back.A - bp.A).norm() + (back.B - bp.B).norm() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("classify is invariant under transform_bc") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 6; ++rep) {
    const BoundaryPair bp = random_bc(3, rng);
    const Mat T = random_invertible(3, rng, 50.0);
    const auto a = classify(bp);
    const auto b = classify(transform_bc(bp, T));
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-8));
  }
}

TEST_CASE("transform and conjugate guard their inputs") {
  const BoundaryPair bp = kirchhoff_bc(3);
  CHECK_THROWS_AS(transform_bc(bp, Mat::Zero(3, 3)), SingularT);
  CHECK_THROWS_AS(transform_bc(bp, Mat::Identity(2, 2)), DimensionMismatch);
  CHECK_THROWS_AS(conjugate_bc(bp, 2.0 * Mat::Identity(3, 3)), NotUnitary);

  // identities leave the pair untouched
  const BoundaryPair t = transform_bc(bp, Mat::Identity(3, 3));
  CHECK((t.A - bp.A).norm() + (t.B - bp.B).norm() == 0.0);
}

TEST_CASE("conjugating a Dirichlet pair by a permutation is a no-op on the class") {
  Mat P = Mat::Zero(3, 3);
  P(0, 2) = P(1, 0) = P(2, 1) = 1.0;
  const BoundaryPair c = conjugate_bc(dirichlet_bc(3), P);
  const NormalForm nf = normal_form(c);
  CHECK(nf.n_D == 3);
}

TEST_CASE("the k=1 free scattering matrix used for extraction is unitary") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 8; ++rep) {
    const BoundaryPair bp = random_bc(3, rng);
    const Mat BiA = bp.B - kI * bp.A;
    const Mat U = -(bp.B + kI * bp.A) * BiA.inverse();
    CHECK((U.adjoint() * U - Mat::Identity(3, 3)).norm() <= 1e-10 * 3);
  }
}

TEST_CASE("kirchhoff pair is valid and mixed-free") {
  const NormalForm nf = normal_form(kirchhoff_bc(4));
  CHECK(nf.n_M + nf.n_D + nf.n_N == 4);
  CHECK(nf.n_M == 0);  // standard vertex condition is Neumann/Dirichlet-like per channel
}
