// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include <catch2/catch_amalgamated.hpp>

#include "entroscope/ensembles.hpp"

using namespace entroscope;

namespace {

double max_member_perturbation(const Ensemble& a, const Ensemble& b) {
  // Member order is stable across the constructions used here.
  double worst = 0.0;
  const int n = std::min(a.size(), b.size());
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, (a.members()[static_cast<std::size_t>(i)].entries() -
                             b.members()[static_cast<std::size_t>(i)].entries())
                                .norm());
  return worst;
}

}  // namespace

TEST_CASE("hjw with the identity parametrization reproduces the spectral ensemble") {
  PositiveOperator a = random_positive(4, 4, 1);
  const int r = a.rank();
  Matrix u = Matrix::Zero(r, r);
  for (int i = 0; i < r; ++i) u(i, i) = 1.0;
  Ensemble e = hjw_ensemble(a, u, BlockPlan::contiguous(r, 1));
  REQUIRE(e.size() == r);
  for (int i = 0; i < r; ++i) {
    CHECK(e.weights()[static_cast<std::size_t>(i)] ==
          Catch::Approx(a.spectrum().values(i)).margin(1e-12));
    CHECK(e.members()[static_cast<std::size_t>(i)].rank() == 1);
  }
}

TEST_CASE("hjw average reconstruction over random parametrizations") {
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 2 + trial % 5;
    const int rank = 1 + trial % dim;
    const int k = 1 + trial % 3;
    PositiveOperator a = random_positive(dim, rank, 100 + trial);
    int m = 1 + (trial / 2) % 4;
    while (m * k < rank) ++m;
    Matrix u = random_stiefel(m * k, rank, 200 + trial);
    Ensemble e = hjw_ensemble(a, u, BlockPlan::contiguous(m, k));
    Matrix sum = Matrix::Zero(dim, dim);
    for (int i = 0; i < e.size(); ++i)
      sum += e.weights()[static_cast<std::size_t>(i)] *
             e.members()[static_cast<std::size_t>(i)].entries();
    REQUIRE((sum - a.entries()).norm() <= 1e-9);
    for (const auto& member : e.members()) REQUIRE(member.rank() <= k);
  }
}

TEST_CASE("hjw validates shapes") {
  PositiveOperator a = random_positive(3, 3, 5);
  Matrix u = random_stiefel(4, 2, 6);  // wrong column count
  CHECK_THROWS_AS(hjw_ensemble(a, u, BlockPlan::contiguous(2, 2)), ValidationError);
}

TEST_CASE("spectral coarse ensemble on the chaotic qutrit") {
  PositiveOperator rho = PositiveOperator::maximally_mixed(3);
  Ensemble e = spectral_coarse_ensemble(rho, 2);
  REQUIRE(e.size() == 2);
  CHECK(e.weights()[0] == Catch::Approx(2.0 / 3.0).margin(1e-12));
  CHECK(e.weights()[1] == Catch::Approx(1.0 / 3.0).margin(1e-12));
  const double gap = ensemble_gap(e);
  CHECK(gap == Catch::Approx(std::log(3.0) - (2.0 / 3.0) * std::log(2.0)).margin(1e-9));
  CHECK(gap == Catch::Approx(0.63651).margin(1e-5));
}

TEST_CASE("spectral coarse ensemble is a singleton at low rank") {
  PositiveOperator a = random_positive(4, 2, 9);
  Ensemble e = spectral_coarse_ensemble(a, 2);
  REQUIRE(e.size() == 1);
  CHECK(e.weights()[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK((e.members()[0].entries() - a.entries()).norm() <= 1e-9);
}

TEST_CASE("spectral coarse ensemble weights follow the coarse-grained spectrum") {
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = 0.5;
  d(1, 1) = 0.3;
  d(2, 2) = 0.1;
  d(3, 3) = 0.1;
  Ensemble e = spectral_coarse_ensemble(PositiveOperator::make(std::move(d)), 2);
  REQUIRE(e.size() == 2);
  CHECK(e.weights()[0] == Catch::Approx(0.8).margin(1e-12));
  CHECK(e.weights()[1] == Catch::Approx(0.2).margin(1e-12));
}

TEST_CASE("coarse ensemble gap equals the coarse-grained classical entropy") {
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 6;
    const int k = 1 + trial % 3;
    PositiveOperator a = random_positive(dim, 1 + trial % dim, 250 + trial);
    Ensemble e = spectral_coarse_ensemble(a, k);
    const RVector& v = a.spectrum().values;
    std::vector<double> s(v.data(), v.data() + v.size());
    const double expected = classical_H(coarse_grain(s, k));
    REQUIRE(std::abs(ensemble_gap(e) - expected) <= 1e-9);
  }
}

TEST_CASE("ensemble gap basics") {
  PositiveOperator a = random_positive(3, 3, 11);
  Ensemble singleton = Ensemble::make_with_average({1.0}, {a}, a);
  CHECK(ensemble_gap(singleton) == Catch::Approx(0.0).margin(1e-10));

  // Pure-state spectral ensemble: members carry no entropy, so the gap is
  // the full S(rho).
  const int r = a.rank();
  Matrix u = Matrix::Zero(r, r);
  for (int i = 0; i < r; ++i) u(i, i) = 1.0;
  Ensemble spectral = hjw_ensemble(a, u, BlockPlan::contiguous(r, 1));
  CHECK(ensemble_gap(spectral) == Catch::Approx(entropy_S(a)).margin(1e-9));
}

TEST_CASE("gap agrees with the entropy route and is nonnegative") {
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 4;
    PositiveOperator a = random_positive(dim, dim, 300 + trial);
    const int k = 1 + trial % 2;
    const int m = dim;
    Matrix u = random_stiefel(m * k, a.rank(), 400 + trial);
    Ensemble e = hjw_ensemble(a, u, BlockPlan::contiguous(m, k));
    const double gap = ensemble_gap(e);
    REQUIRE(gap >= 0.0);
    REQUIRE(std::abs(gap - (entropy_H(a) - ensemble_objective(e))) <= 1e-8);
  }
}

TEST_CASE("Remark-3-style ensemble beats the coarse-graining bound") {
  CVector phi1 = CVector::Zero(3), phi2 = CVector::Zero(3), phi3 = CVector::Zero(3),
          phi4 = CVector::Zero(3);
  phi1(0) = 1.0;
  phi2(0) = -0.5, phi2(1) = std::sqrt(3.0) / 2.0;
  phi3(0) = -0.5, phi3(1) = -std::sqrt(3.0) / 2.0;
  phi4(2) = 1.0;
  PositiveOperator rho1 = PositiveOperator::make(
      Matrix(0.5 * (phi1 * phi1.adjoint()) + 0.5 * (phi2 * phi2.adjoint())));
  PositiveOperator rho2 = PositiveOperator::make(
      Matrix(0.4 * (phi3 * phi3.adjoint()) + 0.6 * (phi4 * phi4.adjoint())));
  Ensemble e = Ensemble::make({4.0 / 9.0, 5.0 / 9.0}, {rho1, rho2});
  CHECK((e.average().entries() - Matrix::Identity(3, 3) / 3.0).norm() <= 1e-12);
  const double gap = ensemble_gap(e);
  const double expected =
      std::log(3.0) - (4.0 / 9.0 * entropy_H(rho1) + 5.0 / 9.0 * entropy_H(rho2));
  CHECK(gap == Catch::Approx(expected).margin(1e-9));
  CHECK(gap == Catch::Approx(0.4748).margin(5e-4));
}

TEST_CASE("push through the identity channel is a no-op") {
  PositiveOperator a = random_positive(3, 3, 21);
  Ensemble e = spectral_coarse_ensemble(a, 2);
  Ensemble pushed = push_ensemble(e, KrausOperation::identity(3));
  REQUIRE(pushed.size() == e.size());
  CHECK(max_member_perturbation(e, pushed) <= 1e-10);
}

TEST_CASE("push through a single contraction maps the average to C A C*") {
  PositiveOperator a = random_positive(3, 3, 22);
  Ensemble e = spectral_coarse_ensemble(a, 2);
  Matrix c = random_contraction(3, 23);
  Ensemble pushed = push_ensemble(e, KrausOperation::make({c}));
  CHECK((pushed.average().entries() - (c * a.entries() * c.adjoint())).norm() <= 1e-10);
}

TEST_CASE("push multiplies ranks by at most the Kraus term count") {
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 3 + trial % 3;
    const int k = 1 + trial % 2;
    const int n = 2 + trial % 3;
    PositiveOperator a = random_positive(dim, dim, 600 + trial);
    Ensemble e = spectral_coarse_ensemble(a, k);
    KrausOperation phi = random_kraus(dim, n, 700 + trial);
    Ensemble pushed = push_ensemble(e, phi);
    Matrix sum = Matrix::Zero(dim, dim);
    for (int i = 0; i < pushed.size(); ++i)
      sum += pushed.weights()[static_cast<std::size_t>(i)] *
             pushed.members()[static_cast<std::size_t>(i)].entries();
    REQUIRE((sum - phi.apply(a).entries()).norm() <= 1e-9);
    for (const auto& member : pushed.members()) REQUIRE(member.rank() <= n * k);
  }
}

TEST_CASE("perturbing toward the same average is a fixed point") {
  PositiveOperator a = random_positive(3, 3, 31);
  Ensemble e = spectral_coarse_ensemble(a, 2);
  Ensemble back = perturb_ensemble(e, a);
  REQUIRE(back.size() == e.size());
  for (int i = 0; i < e.size(); ++i) {
    const PositiveOperator& orig = e.members()[static_cast<std::size_t>(i)];
    CHECK(back.weights()[static_cast<std::size_t>(i)] ==
          Catch::Approx(e.weights()[static_cast<std::size_t>(i)] * orig.trace()).margin(1e-8));
    CHECK((back.members()[static_cast<std::size_t>(i)].entries() -
           orig.entries() / orig.trace())
              .norm() <= 1e-8);
  }
}

TEST_CASE("perturbation shrinks with the target distance") {
  PositiveOperator a = random_positive(3, 3, 41);
  Ensemble e = spectral_coarse_ensemble(a, 2);
  Ensemble base = perturb_ensemble(e, a);
  PositiveOperator direction = random_positive(3, 3, 42);
  double previous = 1e9;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    Matrix target = (1.0 - eps) * a.entries() + eps * direction.entries();
    Ensemble moved = perturb_ensemble(e, PositiveOperator::make(std::move(target)));
    const double dist = max_member_perturbation(base, moved);
    REQUIRE(dist < previous);
    previous = dist;
  }
}

TEST_CASE("perturbed ensembles stay valid and keep the rank cap") {
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 4;
    const int k = 1 + trial % 2;
    PositiveOperator a = random_positive(dim, dim, 800 + trial);
    Ensemble e = spectral_coarse_ensemble(a, k);
    const int cap = e.max_member_rank();
    PositiveOperator target = random_positive(dim, dim, 900 + trial);
    Ensemble moved = perturb_ensemble(e, target);
    double total = 0.0;
    Matrix sum = Matrix::Zero(dim, dim);
    for (int i = 0; i < moved.size(); ++i) {
      total += moved.weights()[static_cast<std::size_t>(i)];
      sum += moved.weights()[static_cast<std::size_t>(i)] *
             moved.members()[static_cast<std::size_t>(i)].entries();
      REQUIRE(moved.members()[static_cast<std::size_t>(i)].rank() <= cap);
    }
    REQUIRE(total == Catch::Approx(1.0).margin(1e-10));
    REQUIRE((sum - target.entries()).norm() <= 1e-8);
  }
}

TEST_CASE("perturb_ensemble validates dimensions and traces") {
  PositiveOperator a = random_positive(3, 3, 51);
  Ensemble e = spectral_coarse_ensemble(a, 2);
  CHECK_THROWS_AS(perturb_ensemble(e, random_positive(4, 4, 52)), ValidationError);
  CHECK_THROWS_AS(perturb_ensemble(e, a.scaled(0.5)), ValidationError);
}
