// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// Ensembles of positive operators with a common average, the
// Schroedinger-HJW parametrization of rank-constrained decompositions, and
// the purification-alignment perturbation that retargets an ensemble to a
// nearby average without raising member ranks.

#pragma once

#include <utility>
#include <vector>

#include "entroscope/entropy.hpp"
#include "entroscope/linalg.hpp"

namespace entroscope {

/// Finite weighted list of positive operators. Weights sum to one and the
/// weighted member sum reproduces the cached average (Frobenius 1e-9).
class Ensemble {
 public:
  /// Trivial singleton ensemble of the 1x1 zero operator; placeholder value
  /// for default-constructed results.
  Ensemble() : weights_{1.0}, members_{PositiveOperator::zero(1)} {}

  static Ensemble make(std::vector<double> weights, std::vector<PositiveOperator> members) {
    if (weights.empty() || weights.size() != members.size())
      throw ValidationError("Ensemble: weights and members must be nonempty and match");
    const int d = members.front().dim();
    Matrix avg = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].dim() != d) throw ValidationError("Ensemble: mixed member dimensions");
      avg += weights[i] * members[i].entries();
    }
    return make_with_average(std::move(weights), std::move(members),
                             PositiveOperator::make(std::move(avg)));
  }

  static Ensemble make_with_average(std::vector<double> weights,
                                    std::vector<PositiveOperator> members,
                                    PositiveOperator average) {
    if (weights.empty() || weights.size() != members.size())
      throw ValidationError("Ensemble: weights and members must be nonempty and match");
    double total = 0.0;
    for (double w : weights) {
      if (w < -1e-12) throw ValidationError("Ensemble: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-10)
      throw ValidationError("Ensemble: weights sum to " + std::to_string(total));
    const int d = average.dim();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].dim() != d) throw ValidationError("Ensemble: mixed member dimensions");
      sum += weights[i] * members[i].entries();
    }
    const double defect = (sum - average.entries()).norm();
    if (defect > tol::ensemble_abs * std::max(1.0, average.entries().norm()))
      throw ValidationError("Ensemble: average reconstruction defect " +
                            std::to_string(defect));
    Ensemble e;
    e.weights_ = std::move(weights);
    e.members_ = std::move(members);
    e.average_ = std::move(average);
    return e;
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<PositiveOperator>& members() const { return members_; }
  const PositiveOperator& average() const { return average_; }
  int size() const { return static_cast<int>(members_.size()); }
  int dim() const { return average_.dim(); }

  /// Largest member rank (the ensemble's effective rank cap).
  int max_member_rank() const {
    int r = 0;
    for (const auto& m : members_) r = std::max(r, m.rank());
    return r;
  }

 private:
  std::vector<double> weights_;
  std::vector<PositiveOperator> members_;
  PositiveOperator average_ = PositiveOperator::zero(1);
};

/// Partition of N = m*k piece indices into m blocks of size <= k. Pieces in
/// one block are summed into one ensemble member, capping its rank at k.
struct BlockPlan {
  int m = 0;
  int k = 0;
  std::vector<std::vector<int>> blocks;

  static BlockPlan contiguous(int m, int k) {
    if (m < 1 || k < 1) throw ValidationError("BlockPlan: m and k must be >= 1");
    BlockPlan plan;
    plan.m = m;
    plan.k = k;
    plan.blocks.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) plan.blocks[static_cast<std::size_t>(i)].push_back(i * k + j);
    return plan;
  }

  int pieces() const { return m * k; }

  void validate() const {
    if (static_cast<int>(blocks.size()) != m)
      throw ValidationError("BlockPlan: block count does not match m");
    std::vector<char> seen(static_cast<std::size_t>(pieces()), 0);
    for (const auto& b : blocks) {
      if (static_cast<int>(b.size()) > k)
        throw ValidationError("BlockPlan: block larger than k");
      for (int idx : b) {
        if (idx < 0 || idx >= pieces() || seen[static_cast<std::size_t>(idx)])
          throw ValidationError("BlockPlan: blocks must partition 0..m*k-1");
        seen[static_cast<std::size_t>(idx)] = 1;
      }
    }
    for (char c : seen)
      if (!c) throw ValidationError("BlockPlan: blocks must cover 0..m*k-1");
  }
};

/// Schroedinger-HJW decomposition: with A = sum_l s_l |w_l><w_l| (rank r)
/// and U an (m*k) x r isometry, the pieces |psi_j> = sum_l U_{jl} sqrt(s_l)
/// |w_l> satisfy sum_j |psi_j><psi_j| = A, and summing each block of at most
/// k pieces yields a member of rank <= k. Blocks with trace below 1e-12 are
/// dropped and the weights renormalized.
inline Ensemble hjw_ensemble(const PositiveOperator& a, const Matrix& u,
                             const BlockPlan& plan) {
  plan.validate();
  const Spectrum& s = a.spectrum();
  const int r = s.rank();
  if (r == 0) {
    return Ensemble::make_with_average({1.0}, {a}, a);
  }
  if (u.rows() != plan.pieces() || u.cols() != r)
    throw ValidationError("hjw_ensemble: U must be (m*k) x rank(A)");
  if ((u.adjoint() * u - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("hjw_ensemble: U columns not orthonormal");

  // Pieces as columns: Psi = W_r diag(sqrt(s)) U^T.
  Matrix w_r = s.basis.leftCols(r);
  RVector roots = s.values.head(r).cwiseSqrt();
  Matrix pieces = w_r * roots.asDiagonal() * u.transpose();

  // Members are trace-aligned to Tr A (the Lemma-6A normalization), so the
  // weighted sum reproduces A and the weights are the block trace fractions.
  const double t = a.trace();
  std::vector<double> weights;
  std::vector<PositiveOperator> members;
  double kept = 0.0;
  for (const auto& block : plan.blocks) {
    Matrix m = Matrix::Zero(a.dim(), a.dim());
    for (int j : block) m += pieces.col(j) * pieces.col(j).adjoint();
    const double tr = m.trace().real();
    if (tr < tol::drop_trace) continue;
    m *= t / tr;
    weights.push_back(tr / t);
    kept += tr / t;
    members.push_back(PositiveOperator::make(std::move(m)));
  }
  if (members.empty()) return Ensemble::make_with_average({1.0}, {a}, a);
  for (double& w : weights) w /= kept;
  return Ensemble::make(std::move(weights), std::move(members));
}

/// The spectral coarse-graining ensemble: members are the normalized spectral
/// compressions P_i A / pi_i over consecutive k-groups of eigenvalues, with
/// pi_i = lambda_i^k(A) / ||A||_1. Every member has trace Tr A and rank <= k;
/// the ensemble's gap equals the classical entropy of the coarse-grained
/// spectrum.
inline Ensemble spectral_coarse_ensemble(const PositiveOperator& a, int k) {
  if (k < 1) throw ValidationError("spectral_coarse_ensemble: k must be >= 1");
  const Spectrum& s = a.spectrum();
  const double t = a.trace();
  const int r = s.rank();
  if (r == 0 || r <= k) return Ensemble::make_with_average({1.0}, {a}, a);

  std::vector<double> weights;
  std::vector<PositiveOperator> members;
  for (int start = 0; start < r; start += k) {
    const int stop = std::min(start + k, r);
    double group = 0.0;
    for (int j = start; j < stop; ++j) group += s.values(j);
    if (group / t < tol::drop_trace) continue;
    Matrix m = Matrix::Zero(a.dim(), a.dim());
    for (int j = start; j < stop; ++j)
      m += (s.values(j) * t / group) * (s.basis.col(j) * s.basis.col(j).adjoint());
    weights.push_back(group / t);
    members.push_back(PositiveOperator::make(std::move(m)));
  }
  double kept = 0.0;
  for (double w : weights) kept += w;
  for (double& w : weights) w /= kept;
  return Ensemble::make(std::move(weights), std::move(members));
}

namespace detail {
/// Trace-aligned view: members rescaled to trace ||A||_1 with weights
/// lambda_i = w_i Tr(A_i) / Tr(A). Aligning never lowers the ensemble-average
/// entropy and never raises the gap.
struct AlignedEnsemble {
  std::vector<double> weights;
  std::vector<PositiveOperator> members;
};

inline AlignedEnsemble align_traces(const Ensemble& e) {
  AlignedEnsemble out;
  const double t = e.average().trace();
  if (t <= 0.0) {
    out.weights = {1.0};
    out.members = {e.average()};
    return out;
  }
  for (int i = 0; i < e.size(); ++i) {
    const double tr = e.members()[static_cast<std::size_t>(i)].trace();
    const double lam = e.weights()[static_cast<std::size_t>(i)] * tr / t;
    if (lam < tol::drop_trace) continue;
    out.weights.push_back(lam);
    out.members.push_back(e.members()[static_cast<std::size_t>(i)].scaled(t / tr));
  }
  return out;
}
}  // namespace detail

/// Ensemble-average entropy after trace alignment: sum_i lambda_i H(B_i).
/// This is the quantity the rank-constrained optimizer maximizes.
inline double ensemble_objective(const Ensemble& e) {
  detail::AlignedEnsemble al = detail::align_traces(e);
  double value = 0.0;
  for (std::size_t i = 0; i < al.members.size(); ++i)
    value += al.weights[i] * entropy_H(al.members[i]);
  return value;
}

/// Ensemble gap sum_i lambda_i H(B_i || A) over the trace-aligned members.
/// Equals H(A) - ensemble_objective(e) within numerical tolerance; +infinity
/// signals a member supported outside the average (numerically inconsistent
/// input, impossible for exact decompositions).
inline double ensemble_gap(const Ensemble& e) {
  detail::AlignedEnsemble al = detail::align_traces(e);
  double value = 0.0;
  for (std::size_t i = 0; i < al.members.size(); ++i) {
    const double h = rel_entropy(al.members[i], e.average());
    if (std::isinf(h)) return infinity();
    value += al.weights[i] * h;
  }
  return value;
}

/// Pushforward through a quantum operation: members Phi(A_i) trace-aligned to
/// the new average Phi(A). Member ranks grow by at most the number of Kraus
/// terms.
inline Ensemble push_ensemble(const Ensemble& e, const KrausOperation& phi) {
  PositiveOperator avg = phi.apply(e.average());
  const double t = avg.trace();
  if (t < tol::drop_trace)
    return Ensemble::make_with_average({1.0}, {avg}, avg);
  std::vector<double> weights;
  std::vector<PositiveOperator> members;
  for (int i = 0; i < e.size(); ++i) {
    PositiveOperator img = phi.apply(e.members()[static_cast<std::size_t>(i)]);
    const double tr = img.trace();
    const double lam = e.weights()[static_cast<std::size_t>(i)] * tr / t;
    if (lam < tol::drop_trace) continue;
    weights.push_back(lam);
    members.push_back(img.scaled(t / tr));
  }
  double kept = 0.0;
  for (double w : weights) kept += w;
  for (double& w : weights) w /= kept;
  return Ensemble::make_with_average(std::move(weights), std::move(members), std::move(avg));
}

/// Retargets an ensemble of rank-<=k members with unit-trace average rho0 to
/// a new unit-trace average, keeping the rank cap:
///   1. purify each member into H (x) H_k and assemble
///      |psi0> = sum_i sqrt(pi_i) |phi_i> (x) |eps_i>;
///   2. take the canonical purification of the target and rotate its ancilla
///      by the polar unitary maximizing the overlap with |psi0>;
///   3. measure the ancilla labels {eps_i} and renormalize the outcomes.
/// Outcomes with probability below 1e-12 are dropped and the weights
/// renormalized.
inline Ensemble perturb_ensemble(const Ensemble& e, const PositiveOperator& target) {
  const int d = e.dim();
  if (target.dim() != d) throw ValidationError("perturb_ensemble: dimension mismatch");
  if (std::abs(e.average().trace() - 1.0) > 1e-8 || std::abs(target.trace() - 1.0) > 1e-8)
    throw ValidationError("perturb_ensemble: averages must have unit trace");

  const int k = std::max(e.max_member_rank(), 1);
  const int m0 = e.size();
  // Enough ancilla labels that H (x) H_k (x) H' can purify the target.
  int m_labels = m0;
  while (k * m_labels < target.rank()) ++m_labels;
  const int anc = k * m_labels;

  // |psi0>, flat index (x, a, i) -> (x*k + a)*m_labels + i.
  CVector psi0 = CVector::Zero(static_cast<Eigen::Index>(d) * anc);
  for (int i = 0; i < m0; ++i) {
    const double tr = e.members()[static_cast<std::size_t>(i)].trace();
    const double lam = e.weights()[static_cast<std::size_t>(i)] * tr;
    if (lam <= 0.0) continue;
    PositiveOperator state = e.members()[static_cast<std::size_t>(i)].scaled(1.0 / tr);
    CVector phi = hjw_purify(state, k);  // length d*k, index x*k + a
    const double root = std::sqrt(lam);
    for (int x = 0; x < d; ++x)
      for (int a = 0; a < k; ++a)
        psi0((x * k + a) * m_labels + i) = root * phi(x * k + a);
  }

  // Canonical purification of the target into the same ancilla.
  CVector psic = CVector::Zero(static_cast<Eigen::Index>(d) * anc);
  {
    const Spectrum& s = target.spectrum();
    for (int b = 0; b < s.rank(); ++b) {
      const double root = std::sqrt(s.values(b));
      for (int x = 0; x < d; ++x) psic(x * anc + b) += root * s.basis(x, b);
    }
  }

  // Ancilla overlap T_{pq} = sum_x conj(psi0[x,p]) psic[x,q]; the polar
  // unitary of T^T maximizes Re <psi0|(I (x) W)|psic>.
  Matrix t_ov = Matrix::Zero(anc, anc);
  for (int x = 0; x < d; ++x)
    for (int p = 0; p < anc; ++p)
      for (int q = 0; q < anc; ++q)
        t_ov(p, q) += std::conj(psi0(x * anc + p)) * psic(x * anc + q);
  Eigen::JacobiSVD<Matrix> svd(t_ov.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix w = svd.matrixV() * svd.matrixU().adjoint();

  CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * anc);
  for (int x = 0; x < d; ++x)
    psi.segment(static_cast<Eigen::Index>(x) * anc, anc) =
        w * psic.segment(static_cast<Eigen::Index>(x) * anc, anc);

  // Measure E_i = I (x) I (x) |eps_i><eps_i| and trace out H_k.
  std::vector<double> weights;
  std::vector<PositiveOperator> members;
  for (int i = 0; i < m_labels; ++i) {
    Matrix chi(d, k);  // slice (x, a) at label i
    for (int x = 0; x < d; ++x)
      for (int a = 0; a < k; ++a) chi(x, a) = psi((x * k + a) * m_labels + i);
    const double prob = chi.squaredNorm();
    if (prob < tol::drop_trace) continue;  // zero-outcome case: block dropped
    Matrix member = (chi * chi.adjoint()) / prob;
    weights.push_back(prob);
    members.push_back(PositiveOperator::make(std::move(member)));
  }
  if (members.empty())
    throw ValidationError("perturb_ensemble: every outcome had zero probability");
  double kept = 0.0;
  for (double wgt : weights) kept += wgt;
  for (double& wgt : weights) wgt /= kept;
  return Ensemble::make(std::move(weights), std::move(members));
}

}  // namespace entroscope
