#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hl/errors.hpp"
#include "hl/grid.hpp"
#include "hl/scattering.hpp"
#include "test_util.hpp"

using namespace hl;
using hltest::random_bc;
using hltest::random_invertible;
using hltest::random_unitary;

TEST_CASE("free Jost matrix is B - ikA with the canonical channel entries") {
  const Complex k(1.7, 0.0);
  CHECK((free_jost(dirichlet_bc(2), k) - Mat::Identity(2, 2)).norm() == 0.0);
  CHECK((free_jost(neumann_bc(2), k) - kI * k * Mat::Identity(2, 2)).norm() == 0.0);
  std::mt19937_64 rng(2);
  const BoundaryPair bp = random_bc(3, rng);
  CHECK((free_jost(bp, k) - (bp.B - kI * k * bp.A)).norm() == 0.0);
}

TEST_CASE("free scattering matrix closed forms per channel type") {
  for (double k : {0.3, 1.0, 6.0}) {
    CHECK((free_smatrix(neumann_bc(2), k).S - Mat::Identity(2, 2)).norm() <= 1e-14);
    CHECK((free_smatrix(dirichlet_bc(2), k).S + Mat::Identity(2, 2)).norm() <= 1e-14);
    const double th = kPi / 3;
    const Complex want =
        (-std::cos(th) + kI * k * std::sin(th)) / (std::cos(th) + kI * k * std::sin(th));
    CHECK(std::abs(free_smatrix(bc_from_thetas({th}), k).S(0, 0) - want) <= 1e-14);
  }
}

TEST_CASE("scattering matrix at V = 0 agrees with the closed form through the solver path") {
  std::mt19937_64 rng(5);
  const BoundaryPair bp = random_bc(2, rng);
  const auto p = PotentialSpec::zero(2);
  for (double k : {0.4, 1.5, 9.0}) {
    const Mat a = scattering_matrix(p, bp, k).S;
    const Mat b = free_smatrix(bp, k).S;
    CHECK((a - b).norm() <= 1e-10);
  }
}

TEST_CASE("Jost matrix triple consistency on the scalar well") {
  const auto p = PotentialSpec::square_well(1, 3.0, 1.0);
  const auto bp = dirichlet_bc(1);
  for (double k : {0.5, 1.0, 2.5, 5.0}) {
    const Mat j1 = jost_matrix(p, bp, k);
    const Mat j2 = jost_matrix_wronskian(p, bp, k);
    const Mat j3 = jost_matrix_integral(p, bp, k);
    CHECK((j1 - j2).norm() <= 1e-8);
    CHECK((j1 - j3).norm() <= 1e-8);
  }
}

TEST_CASE("unitarity on random pairs with a matrix well") {
  std::mt19937_64 rng(7);
  const auto p = PotentialSpec::coupled_well(2.0, 4.0, 0.6, 1.2);
  for (int rep = 0; rep < 3; ++rep) {
    const BoundaryPair bp = random_bc(2, rng);
    for (double k : linspace(0.2, 15.0, 12)) {
      const auto s = scattering_matrix(p, bp, k);
      CHECK(s.unitarity_defect <= 1e-8);
    }
  }
}

TEST_CASE("S is invariant under transform_bc and covariant under conjugation") {
  std::mt19937_64 rng(11);
  const auto p = PotentialSpec::coupled_well(1.0, 3.0, 0.4, 1.0);
  const BoundaryPair bp = random_bc(2, rng);
  const Mat T = random_invertible(2, rng, 30.0);
  const Mat M = random_unitary(2, rng);
  const BoundaryPair bpt = transform_bc(bp, T);
  const BoundaryPair bpc = conjugate_bc(bp, M);
  const auto pc = p.conjugated(M);
  for (double k : {0.6, 2.2}) {
    const Mat S = scattering_matrix(p, bp, k).S;
    CHECK((scattering_matrix(p, bpt, k).S - S).norm() <= 1e-9);
    CHECK((scattering_matrix(pc, bpc, k).S - M * S * M.adjoint()).norm() <= 1e-9);
  }
}

TEST_CASE("high energy model: free cases and moment consistency") {
  const auto zero2 = PotentialSpec::zero(2);
  const auto mn = high_energy_model(zero2, neumann_bc(2));
  CHECK((mn.S_inf - Mat::Identity(2, 2)).norm() <= 1e-12);
  CHECK(mn.G(3.0).norm() <= 1e-12);
  const auto md = high_energy_model(zero2, dirichlet_bc(2));
  CHECK((md.S_inf + Mat::Identity(2, 2)).norm() <= 1e-12);

  // S_inf is unitary for a random pair
  std::mt19937_64 rng(13);
  const BoundaryPair bp = random_bc(3, rng);
  const auto m = high_energy_model(PotentialSpec::zero(3), bp);
  CHECK((m.S_inf * m.S_inf.adjoint() - Mat::Identity(3, 3)).norm() <= 1e-10);
}

TEST_CASE("high energy model residual is small at large k") {
  const auto p = PotentialSpec::square_well(1, 2.0, 1.0);
  const auto bp = dirichlet_bc(1);
  const auto model = high_energy_model(p, bp);
  const double r50 = (scattering_matrix(p, bp, 50.0).S - model.eval(50.0)).norm();
  const double r200 = (scattering_matrix(p, bp, 200.0).S - model.eval(200.0)).norm();
  CHECK(r50 <= 1e-2);
  CHECK(r200 / r50 <= std::pow(200.0 / 50.0, -1.5));  // decays at least like 1/k^1.5
}

TEST_CASE("det arg branch: free closed forms") {
  const auto kgrid = linspace(0.1, 30.0, 200);
  std::vector<SMatrixSample> neu, dir;
  for (double k : kgrid) {
    neu.push_back(free_smatrix(neumann_bc(1), k));
    dir.push_back(free_smatrix(dirichlet_bc(1), k));
  }
  for (double th : det_arg_branch(neu, 0)) CHECK(std::abs(th) <= 1e-12);
  for (double th : det_arg_branch(dir, 1)) CHECK(std::abs(th + kPi) <= 1e-12);
}

TEST_CASE("det arg branch rejects undersampled phase data") {
  std::vector<SMatrixSample> samples;
  for (double k : {1.0, 2.0}) {
    SMatrixSample s;
    s.k = k;
    s.S = Mat::Identity(1, 1) * std::exp(kI * (k == 1.0 ? 2.0 : -2.0));
    samples.push_back(s);
  }
  CHECK_THROWS_AS(det_arg_branch(samples, 0), BranchJump);
}

TEST_CASE("track_det_arg refines through fast phase motion") {
  const auto p = PotentialSpec::square_well(1, (0.6 * kPi) * (0.6 * kPi), 1.0);
  const auto bp = dirichlet_bc(1);
  auto eval = [&](double k) { return scattering_matrix(p, bp, k); };
  // deliberately coarse initial grid; refinement must still produce a branch
  const ArgBranch br = track_det_arg(eval, linspace(0.05, 40.0, 12), 1);
  REQUIRE(br.theta.size() == br.samples.size());
  CHECK(std::abs(br.theta.back() + kPi) <= 0.2);  // pinned near -pi n_D at large k
  for (size_t i = 1; i < br.theta.size(); ++i)
    CHECK(std::abs(br.theta[i] - br.theta[i - 1]) < kPi / 2);
}

TEST_CASE("Born identity defect") {
  const auto bp = dirichlet_bc(1);
  CHECK(born_identity_defect(PotentialSpec::zero(1), bp, 1.0) <= 1e-12);
  const auto p = PotentialSpec::square_well(1, 2.0, 1.0);
  CHECK(born_identity_defect(p, bp, 1.0) <= 1e-7);
  std::mt19937_64 rng(17);
  const Mat T = random_invertible(1, rng, 20.0);
  const double d1 = born_identity_defect(p, bp, 1.3);
  const double d2 = born_identity_defect(p, transform_bc(bp, T), 1.3);
  CHECK(std::abs(d1 - d2) <= 1e-9);
}

TEST_CASE("det J stays away from zero on the real axis") {
  const auto p = PotentialSpec::square_well(1, 3.0, 1.0);
  const auto bp = dirichlet_bc(1);
  for (double k : logspace(0.05, 50.0, 40)) {
    const Mat J = jost_matrix(p, bp, k);
    CHECK(std::abs(J.determinant()) > 1e-6);
  }
}
