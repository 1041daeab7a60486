// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// Two explicit constructions: the chaotic-qutrit witness that the true gap
// beats the spectral coarse-graining bound, and the block-diagonal sequence
// whose entropy has a closed form, stays >= 1 along the sequence, yet drops
// to 0 at the limit point.

#pragma once

#include <vector>

#include "entroscope/approximator.hpp"

namespace entroscope {

struct Remark3Report {
  double H_rho = 0.0;
  double H_rho1 = 0.0;
  double H_rho2 = 0.0;
  double ensemble_value = 0.0;  // (4/9) H(rho1) + (5/9) H(rho2)
  double delta_tilde_2 = 0.0;
  double delta_hat_2 = 0.0;
  bool strict_gap_confirmed = false;  // delta_hat_2 < delta_tilde_2 - 1e-3
  Ensemble ensemble;
};

/// The two rank-2 states on the chaotic qutrit built from the unit vectors
/// (1,0,0), (-1/2, sqrt3/2, 0), (-1/2, -sqrt3/2, 0), (0,0,1):
/// rho1 = (|phi1><phi1| + |phi2><phi2|)/2, rho2 = (2|phi3><phi3| +
/// 3|phi4><phi4|)/5, with (4/9) rho1 + (5/9) rho2 = I/3 exactly.
inline Ensemble remark3_ensemble() {
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
  return Ensemble::make({4.0 / 9.0, 5.0 / 9.0}, {rho1, rho2});
}

/// Builds the witness report: the explicit two-state ensemble is passed to
/// the k = 2 estimator as a seed, so delta_hat_2 is at most the ensemble's
/// gap, which already sits strictly below the coarse-graining bound.
inline Remark3Report remark3_witness() {
  Ensemble e = remark3_ensemble();
  PositiveOperator rho = PositiveOperator::maximally_mixed(3);
  if ((e.average().entries() - rho.entries()).norm() > 1e-12)
    throw std::runtime_error("remark3_witness: average identity failed");

  Remark3Report report;
  report.ensemble = e;
  report.H_rho = entropy_H(rho);
  report.H_rho1 = entropy_H(e.members()[0]);
  report.H_rho2 = entropy_H(e.members()[1]);
  report.ensemble_value = (4.0 / 9.0) * report.H_rho1 + (5.0 / 9.0) * report.H_rho2;
  report.delta_tilde_2 = delta_tilde(rho, 2);

  ApproxConfig cfg;
  cfg.k = 2;
  cfg.restarts = 16;
  cfg.max_iters = 200;
  cfg.seed = 7;
  cfg.extra_seeds.push_back(e);
  ApproxResult res = approx_hk(rho, cfg);
  report.delta_hat_2 = res.delta_hat;
  report.strict_gap_confirmed = report.delta_hat_2 < report.delta_tilde_2 - 1e-3;
  return report;
}

/// Block sequence sigma_i = (1 - lambda_i) rho0 (+) lambda_i rho_i with rho0
/// a pure state on its own axis, rho_i = I_{d_i}/d_i on orthogonal blocks,
/// and lambda_i = 1 / ln(d_i) so that lambda_i H(rho_i) = 1 exactly. Every
/// d_i >= 3 keeps lambda_i <= 1.
struct BlockSequenceSpec {
  std::vector<int> block_dims;
  std::vector<double> pi;  // mixing weights over the sigma_i, sums to 1

  void validate() const {
    if (block_dims.empty()) throw ValidationError("BlockSequenceSpec: no blocks");
    for (int d : block_dims)
      if (d < 3)
        throw ValidationError(
            "BlockSequenceSpec: block dimension below 3 would push lambda_i above 1");
    if (pi.size() > block_dims.size())
      throw ValidationError("BlockSequenceSpec: more weights than blocks");
    double total = 0.0;
    for (double w : pi) {
      if (w < -1e-12) throw ValidationError("BlockSequenceSpec: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-10)
      throw ValidationError("BlockSequenceSpec: weights sum to " + std::to_string(total));
  }

  double lambda(std::size_t i) const {
    return 1.0 / std::log(static_cast<double>(block_dims[i]));
  }

  double weight(std::size_t i) const { return i < pi.size() ? pi[i] : 0.0; }

  int total_dim() const {
    int d = 1;
    for (int b : block_dims) d += b;
    return d;
  }
};

/// Closed form for H(sum_i pi_i sigma_i):
///   1 + eta(sum_i pi_i (1 - lambda_i))
///     + sum_i pi_i lambda_i (-ln pi_i) + sum_i pi_i lambda_i (-ln lambda_i),
/// the leading 1 being sum_i pi_i lambda_i H(rho_i). Weights are
/// zero-extended to the block count; zero-weight terms contribute nothing.
inline double blockdiag_entropy_closed_form(const BlockSequenceSpec& spec) {
  spec.validate();
  double head = 0.0;   // weight landing on the shared pure axis
  double mixed = 0.0;  // sum pi_i lambda_i (-ln pi_i - ln lambda_i)
  for (std::size_t i = 0; i < spec.block_dims.size(); ++i) {
    const double pi_i = spec.weight(i);
    if (pi_i <= 0.0) continue;
    const double lam = spec.lambda(i);
    head += pi_i * (1.0 - lam);
    mixed += pi_i * lam * (-std::log(pi_i)) + pi_i * lam * (-std::log(lam));
  }
  return 1.0 + eta(head) + mixed;
}

/// Independent route: materialize sum_i pi_i sigma_i as an explicit
/// block-diagonal matrix (pure axis first, then the maximally mixed blocks)
/// and evaluate the entropy by eigendecomposition. Total dimension capped at
/// 64.
inline double blockdiag_entropy_direct(const BlockSequenceSpec& spec) {
  spec.validate();
  const int dim = spec.total_dim();
  if (dim > 64)
    throw ValidationError("blockdiag_entropy_direct: total dimension " + std::to_string(dim) +
                          " exceeds the cap of 64");
  Matrix m = Matrix::Zero(dim, dim);
  double head = 0.0;
  int offset = 1;
  for (std::size_t i = 0; i < spec.block_dims.size(); ++i) {
    const double pi_i = spec.weight(i);
    const double lam = spec.lambda(i);
    head += pi_i * (1.0 - lam);
    const int b = spec.block_dims[i];
    for (int j = 0; j < b; ++j)
      m(offset + j, offset + j) = pi_i * lam / static_cast<double>(b);
    offset += b;
  }
  m(0, 0) = head;
  return entropy_H(PositiveOperator::make(std::move(m)));
}

/// Entropy of a single sigma_i = (1 - lambda) rho0 (+) lambda I_d / d;
/// equals 1 + h2(lambda) >= 1, while the limit point rho0 has entropy 0.
inline double blockdiag_sigma_entropy(int block_dim) {
  BlockSequenceSpec spec;
  spec.block_dims = {block_dim};
  spec.pi = {1.0};
  return blockdiag_entropy_direct(spec);
}

}  // namespace entroscope
