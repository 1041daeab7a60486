// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "entroscope/common.hpp"

namespace entroscope {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Nonincreasing nonnegative eigenvalues with the matching orthonormal
/// eigenbasis (one column per value).
struct Spectrum {
  RVector values;
  Matrix basis;

  int dim() const { return static_cast<int>(basis.rows()); }

  /// Number of eigenvalues above the rank cutoff 1e-10 * max eigenvalue.
  int rank() const {
    if (values.size() == 0) return 0;
    const double cut = tol::eigh_rel * std::max(values(0), 0.0);
    int r = 0;
    while (r < values.size() && values(r) > cut) ++r;
    return r;
  }
};

/// Dense complex matrix validated (and symmetrized) to be Hermitian.
class HermitianMatrix {
 public:
  static HermitianMatrix make(Matrix m) {
    if (m.rows() != m.cols() || m.rows() == 0)
      throw ValidationError("HermitianMatrix: matrix must be square and nonempty");
    const double scale = m.cwiseAbs().maxCoeff();
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > tol::hermitian_rel * std::max(scale, 1e-300))
      throw ValidationError("HermitianMatrix: symmetry tolerance exceeded (defect " +
                            std::to_string(defect) + ")");
    HermitianMatrix h;
    h.entries_ = 0.5 * (m + m.adjoint().eval());
    return h;
  }

  const Matrix& entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }

 private:
  friend class PositiveOperator;
  HermitianMatrix() : entries_(Matrix::Zero(1, 1)) {}
  Matrix entries_;
};

/// Full eigendecomposition of a Hermitian matrix, values nonincreasing.
/// Postcondition: ||A - V diag(w) V*||_F <= 1e-10 (1 + ||A||_F).
inline Spectrum eigh(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.entries());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  const int d = a.dim();
  Spectrum s;
  s.values = solver.eigenvalues().reverse();
  s.basis = solver.eigenvectors().rowwise().reverse();
  const double err =
      (a.entries() - s.basis * s.values.asDiagonal() * s.basis.adjoint()).norm();
  if (err > tol::eigh_rel * (1.0 + a.entries().norm()))
    throw std::runtime_error("eigh: reconstruction error " + std::to_string(err));
  (void)d;
  return s;
}

/// Hermitian positive semidefinite matrix with cached trace and spectrum.
/// Eigenvalues in [-1e-10 * trace, 0) are clamped to zero in the cached
/// spectrum; anything lower fails validation.
class PositiveOperator {
 public:
  static PositiveOperator make(const HermitianMatrix& h) {
    PositiveOperator p;
    p.matrix_ = h;
    p.trace_ = h.entries().trace().real();
    const double tr_imag = std::abs(h.entries().trace().imag());
    if (tr_imag > tol::hermitian_rel * std::max(1.0, std::abs(p.trace_)))
      throw ValidationError("PositiveOperator: trace has imaginary part");
    p.spectrum_ = eigh(h);
    const double floor = -tol::psd_rel * std::max(p.trace_, 1e-300);
    const double smallest = p.spectrum_.values(p.spectrum_.values.size() - 1);
    if (smallest < floor)
      throw ValidationError("PositiveOperator: smallest eigenvalue " +
                            std::to_string(smallest) + " below tolerance");
    if (p.trace_ < floor)
      throw ValidationError("PositiveOperator: negative trace");
    for (int i = 0; i < p.spectrum_.values.size(); ++i)
      if (p.spectrum_.values(i) < 0.0) p.spectrum_.values(i) = 0.0;
    p.trace_ = std::max(p.trace_, 0.0);
    return p;
  }

  static PositiveOperator make(Matrix m) { return make(HermitianMatrix::make(std::move(m))); }

  /// Zero operator of the given dimension.
  static PositiveOperator zero(int dim) { return make(Matrix::Zero(dim, dim)); }

  /// Maximally mixed state I/d.
  static PositiveOperator maximally_mixed(int dim) {
    return make(Matrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  const Matrix& entries() const { return matrix_.entries(); }
  const HermitianMatrix& hermitian() const { return matrix_; }
  double trace() const { return trace_; }
  int dim() const { return matrix_.dim(); }

  /// Clamped spectrum, computed once at construction.
  const Spectrum& spectrum() const { return spectrum_; }
  int rank() const { return spectrum_.rank(); }

  PositiveOperator scaled(double lambda) const {
    if (lambda < 0.0) throw ValidationError("PositiveOperator::scaled: negative factor");
    return make(Matrix(lambda * entries()));
  }

 private:
  PositiveOperator() = default;
  HermitianMatrix matrix_;
  double trace_ = 0.0;
  Spectrum spectrum_;
};

/// Trace-normalized G G* with G a dim x rank matrix of independent standard
/// complex Gaussians. Deterministic for fixed seed.
inline PositiveOperator random_positive(int dim, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim)
    throw ValidationError("random_positive: rank must satisfy 1 <= rank <= dim");
  SplitMix64 rng = SplitMix64::derive(seed, 0x706f73);  // "pos"
  Matrix g(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = rng.cgaussian();
  Matrix a = g * g.adjoint();
  a /= a.trace().real();
  return PositiveOperator::make(std::move(a));
}

/// Orthonormalization of a complex Gaussian matrix: a Haar-ish point on the
/// Stiefel manifold of rows x cols isometries. Deterministic for fixed seed.
inline Matrix random_stiefel(int rows, int cols, std::uint64_t seed) {
  if (cols < 1 || rows < cols)
    throw ValidationError("random_stiefel: need rows >= cols >= 1");
  SplitMix64 rng = SplitMix64::derive(seed, 0x737466);  // "stf"
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cgaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  return q;
}

inline Matrix random_unitary(int dim, std::uint64_t seed) {
  return random_stiefel(dim, dim, seed);
}

enum class TensorSide { first, second };

/// Partial trace of an operator on C^{d1} (x) C^{d2}; index convention is
/// row = i1 * d2 + i2.
inline PositiveOperator partial_trace(const PositiveOperator& a, int d1, int d2,
                                      TensorSide traced) {
  if (d1 < 1 || d2 < 1 || a.dim() != d1 * d2)
    throw ValidationError("partial_trace: operator dimension does not equal d1*d2");
  const Matrix& m = a.entries();
  if (traced == TensorSide::second) {
    Matrix out = Matrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
    return PositiveOperator::make(std::move(out));
  }
  Matrix out = Matrix::Zero(d2, d2);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k) out(i, j) += m(k * d2 + i, k * d2 + j);
  return PositiveOperator::make(std::move(out));
}

/// Canonical purification |psi> = sum_l sqrt(s_l) |w_l> (x) |l> in
/// C^dim (x) C^anc. Tracing out the ancilla recovers A; the vector norm
/// squared equals Tr A. anc = 0 picks the smallest ancilla (rank of A).
inline CVector hjw_purify(const PositiveOperator& a, int anc = 0) {
  const Spectrum& s = a.spectrum();
  const int r = s.rank();
  if (anc == 0) anc = std::max(r, 1);
  if (anc < r) throw ValidationError("hjw_purify: ancilla smaller than rank");
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(a.dim()) * anc);
  for (int l = 0; l < r; ++l) {
    const double root = std::sqrt(s.values(l));
    for (int x = 0; x < a.dim(); ++x) psi(x * anc + l) = root * s.basis(x, l);
  }
  return psi;
}

/// Outer product |v><v| as a positive operator.
inline PositiveOperator pure_from_vector(const CVector& v) {
  return PositiveOperator::make(Matrix(v * v.adjoint()));
}

/// Square root of a PSD matrix through its clamped spectrum.
inline Matrix sqrt_psd(const PositiveOperator& a) {
  const Spectrum& s = a.spectrum();
  RVector roots = s.values.cwiseSqrt();
  return s.basis * roots.asDiagonal() * s.basis.adjoint();
}

/// Finite Kraus family {V_j} with sum V_j* V_j <= I (within 1e-10).
class KrausOperation {
 public:
  static KrausOperation make(std::vector<Matrix> terms) {
    if (terms.empty()) throw ValidationError("KrausOperation: empty term list");
    const Eigen::Index d = terms.front().rows();
    Matrix gram = Matrix::Zero(d, d);
    for (const Matrix& v : terms) {
      if (v.rows() != d || v.cols() != d)
        throw ValidationError("KrausOperation: terms must be square with a common dim");
      gram += v.adjoint() * v;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.eigenvalues().maxCoeff() > 1.0 + 1e-10)
      throw ValidationError("KrausOperation: sum of V*V exceeds the identity");
    KrausOperation op;
    op.terms_ = std::move(terms);
    return op;
  }

  /// Identity channel on C^dim.
  static KrausOperation identity(int dim) {
    return make({Matrix::Identity(dim, dim)});
  }

  const std::vector<Matrix>& terms() const { return terms_; }
  int size() const { return static_cast<int>(terms_.size()); }
  int dim() const { return static_cast<int>(terms_.front().rows()); }

  PositiveOperator apply(const PositiveOperator& a) const {
    if (a.dim() != dim()) throw ValidationError("KrausOperation: dimension mismatch");
    Matrix out = Matrix::Zero(dim(), dim());
    for (const Matrix& v : terms_) out += v * a.entries() * v.adjoint();
    return PositiveOperator::make(std::move(out));
  }

 private:
  KrausOperation() = default;
  std::vector<Matrix> terms_;
};

/// Trace-preserving Kraus family (sum V*V = I) cut from a Haar isometry.
inline KrausOperation random_kraus(int dim, int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_kraus: need at least one term");
  Matrix iso = random_stiefel(n * dim, dim, seed);
  std::vector<Matrix> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) terms.push_back(iso.block(j * dim, 0, dim, dim));
  return KrausOperation::make(std::move(terms));
}

/// Random contraction: Gaussian matrix rescaled to operator norm <= norm_cap.
inline Matrix random_contraction(int dim, std::uint64_t seed, double norm_cap = 1.0) {
  if (norm_cap <= 0.0 || norm_cap > 1.0)
    throw ValidationError("random_contraction: norm_cap must lie in (0, 1]");
  SplitMix64 rng = SplitMix64::derive(seed, 0x636e74);  // "cnt"
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.cgaussian();
  const double top = g.jacobiSvd().singularValues()(0);
  const double target = norm_cap * (0.25 + 0.75 * rng.uniform());
  return Matrix(g * (target / top));
}

}  // namespace entroscope
