// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include <catch2/catch_amalgamated.hpp>

#include "entroscope/linalg.hpp"

using namespace entroscope;

namespace {

Matrix random_hermitian(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.cgaussian();
  return 0.5 * (g + g.adjoint().eval());
}

CVector remark3_vector(int which) {
  CVector v = CVector::Zero(3);
  switch (which) {
    case 1: v(0) = 1.0; break;
    case 2: v(0) = -0.5; v(1) = std::sqrt(3.0) / 2.0; break;
    case 3: v(0) = -0.5; v(1) = -std::sqrt(3.0) / 2.0; break;
    default: v(2) = 1.0; break;
  }
  return v;
}

}  // namespace

TEST_CASE("eigh on identity and diagonal matrices") {
  Spectrum id3 = eigh(HermitianMatrix::make(Matrix::Identity(3, 3)));
  for (int i = 0; i < 3; ++i) CHECK(id3.values(i) == Catch::Approx(1.0).margin(1e-14));

  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 0.1;
  d(1, 1) = 0.7;
  d(2, 2) = 0.2;
  Spectrum s = eigh(HermitianMatrix::make(d));
  CHECK(s.values(0) == Catch::Approx(0.7).margin(1e-14));
  CHECK(s.values(1) == Catch::Approx(0.2).margin(1e-14));
  CHECK(s.values(2) == Catch::Approx(0.1).margin(1e-14));
}

TEST_CASE("eigh of a two-pure-state mixture has eigenvalues (1 +/- overlap)/2") {
  const CVector phi1 = remark3_vector(1);
  const CVector phi2 = remark3_vector(2);
  const double overlap = std::abs((phi1.adjoint() * phi2)(0, 0));
  REQUIRE(overlap == Catch::Approx(0.5).margin(1e-15));

  Matrix rho1 = 0.5 * (phi1 * phi1.adjoint()) + 0.5 * (phi2 * phi2.adjoint());
  Spectrum s = eigh(HermitianMatrix::make(rho1));
  CHECK(s.values(0) == Catch::Approx((1.0 + overlap) / 2.0).margin(1e-12));
  CHECK(s.values(1) == Catch::Approx((1.0 - overlap) / 2.0).margin(1e-12));
  CHECK(s.values(2) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("eigh rejects non-Hermitian input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianMatrix::make(m), ValidationError);
}

TEST_CASE("eigh round-trip over random Hermitian matrices") {
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 2 + trial % 7;
    HermitianMatrix a = HermitianMatrix::make(random_hermitian(dim, 100 + trial));
    Spectrum s = eigh(a);
    const double err =
        (a.entries() - s.basis * s.values.asDiagonal() * s.basis.adjoint()).norm();
    REQUIRE(err <= 1e-10 * (1.0 + a.entries().norm()));
    for (int i = 1; i < dim; ++i) REQUIRE(s.values(i) <= s.values(i - 1) + 1e-14);
  }
}

TEST_CASE("random_positive basics") {
  PositiveOperator one = random_positive(1, 1, 5);
  CHECK(one.entries()(0, 0).real() == Catch::Approx(1.0).margin(1e-14));

  PositiveOperator a = random_positive(3, 3, 7);
  PositiveOperator b = random_positive(3, 3, 7);
  CHECK((a.entries() - b.entries()).norm() == 0.0);

  PositiveOperator low = random_positive(4, 2, 1);
  int above = 0;
  for (int i = 0; i < 4; ++i)
    if (low.spectrum().values(i) > 1e-10) ++above;
  CHECK(above == 2);

  CHECK_THROWS_AS(random_positive(3, 0, 1), ValidationError);
  CHECK_THROWS_AS(random_positive(3, 4, 1), ValidationError);
}

TEST_CASE("random_positive has the requested rank") {
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 2 + trial % 6;
    const int rank = 1 + trial % dim;
    PositiveOperator a = random_positive(dim, rank, 3000 + trial);
    CHECK(a.trace() == Catch::Approx(1.0).margin(1e-12));
    if (rank < dim) REQUIRE(a.spectrum().values(rank) <= 1e-10);
    REQUIRE(a.spectrum().values(rank - 1) > 1e-10);
  }
}

TEST_CASE("random_stiefel is an isometry") {
  Matrix u = random_stiefel(3, 3, 11);
  CHECK(std::abs(u.determinant()) == Catch::Approx(1.0).margin(1e-8));

  Matrix v = random_stiefel(6, 3, 12);
  CHECK((v.adjoint() * v - Matrix::Identity(3, 3)).norm() <= 1e-10);

  Matrix w = random_stiefel(2, 1, 0);
  CHECK(w.col(0).norm() == Catch::Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(random_stiefel(2, 3, 0), ValidationError);
}

TEST_CASE("partial_trace on product and entangled states") {
  PositiveOperator rho = random_positive(2, 2, 21);
  PositiveOperator sigma = random_positive(3, 3, 22);
  Matrix prod = Matrix::Zero(6, 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      prod.block(i * 3, j * 3, 3, 3) = rho.entries()(i, j) * sigma.entries();
  PositiveOperator ab = PositiveOperator::make(prod);

  PositiveOperator left = partial_trace(ab, 2, 3, TensorSide::second);
  CHECK((left.entries() - rho.entries()).norm() <= 1e-12);
  PositiveOperator right = partial_trace(ab, 2, 3, TensorSide::first);
  CHECK((right.entries() - sigma.entries()).norm() <= 1e-12);

  CVector bell = CVector::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  PositiveOperator omega = pure_from_vector(bell);
  PositiveOperator reduced = partial_trace(omega, 2, 2, TensorSide::second);
  CHECK((reduced.entries() - Matrix::Identity(2, 2) * 0.5).norm() <= 1e-12);

  CHECK_THROWS_AS(partial_trace(ab, 2, 2, TensorSide::first), ValidationError);
}

TEST_CASE("hjw_purify round-trips through the partial trace") {
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 4;
    const int rank = 1 + trial % dim;
    PositiveOperator a = random_positive(dim, rank, 500 + trial);
    CVector psi = hjw_purify(a);
    const int anc = static_cast<int>(psi.size()) / dim;
    PositiveOperator back = partial_trace(pure_from_vector(psi), dim, anc, TensorSide::second);
    REQUIRE((back.entries() - a.entries()).norm() <= 1e-10);
  }
}

TEST_CASE("partial_trace preserves trace and positivity") {
  for (int trial = 0; trial < 500; ++trial) {
    const int d1 = 2 + trial % 3;
    const int d2 = 2 + (trial / 3) % 3;
    PositiveOperator a = random_positive(d1 * d2, 1 + trial % (d1 * d2), 900 + trial);
    const TensorSide side = trial % 2 == 0 ? TensorSide::first : TensorSide::second;
    PositiveOperator t = partial_trace(a, d1, d2, side);
    REQUIRE(t.trace() == Catch::Approx(a.trace()).margin(1e-10));
    REQUIRE(t.spectrum().values(t.dim() - 1) >= -1e-10);
  }
}

TEST_CASE("KrausOperation validates the contraction bound") {
  Matrix big = 1.2 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(KrausOperation::make({big}), ValidationError);

  KrausOperation phi = random_kraus(3, 4, 33);
  Matrix gram = Matrix::Zero(3, 3);
  for (const Matrix& v : phi.terms()) gram += v.adjoint() * v;
  CHECK((gram - Matrix::Identity(3, 3)).norm() <= 1e-10);

  PositiveOperator a = random_positive(3, 3, 34);
  PositiveOperator img = phi.apply(a);
  CHECK(img.trace() == Catch::Approx(a.trace()).margin(1e-10));
}

TEST_CASE("PositiveOperator rejects indefinite matrices") {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(PositiveOperator::make(m), ValidationError);
}
