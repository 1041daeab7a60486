// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// Entropy functionals on the positive cone. Natural logarithm throughout;
// +infinity is carried as the IEEE infinity and never fed into finite
// tolerance comparisons.

#pragma once

#include <limits>
#include <numeric>
#include <vector>

#include "entroscope/linalg.hpp"

namespace entroscope {

namespace detail {
// Grace window for arguments that should be nonnegative but arrive with
// roundoff dust from upstream arithmetic.
inline constexpr double arg_grace = 1e-14;
}  // namespace detail

/// eta(x) = -x ln x, continuously extended by eta(0) = 0.
inline double eta(double x) {
  if (x < -detail::arg_grace) throw ValidationError("eta: negative argument");
  if (x <= 0.0) return 0.0;
  return -x * std::log(x);
}

/// Binary mixing entropy h2(x) = eta(x) + eta(1-x) on [0, 1].
inline double h2(double x) {
  if (x < -detail::arg_grace || x > 1.0 + detail::arg_grace)
    throw ValidationError("h2: argument outside [0, 1]");
  const double y = std::clamp(x, 0.0, 1.0);
  return eta(y) + eta(1.0 - y);
}

/// Entropy of an explicit eigenvalue list (no trace correction).
inline double entropy_from_values(const RVector& values) {
  double s = 0.0;
  for (int i = 0; i < values.size(); ++i) s += eta(std::max(values(i), 0.0));
  return s;
}

/// S(A) = -Tr A ln A = sum eta(lambda_i(A)).
inline double entropy_S(const PositiveOperator& a) {
  return entropy_from_values(a.spectrum().values);
}

/// Quantum entropy on the cone: H(A) = S(A) - eta(Tr A). Coincides with S on
/// unit-trace operators and is homogeneous: H(lambda A) = lambda H(A).
inline double entropy_H(const PositiveOperator& a) {
  return entropy_S(a) - eta(a.trace());
}

/// Classical entropy of a finite nonnegative weight sequence:
/// H({x_i}) = sum eta(x_i) - eta(sum x_i). Equals entropy_H of diag(x).
inline double classical_H(const std::vector<double>& x) {
  double total = 0.0;
  double s = 0.0;
  for (double v : x) {
    if (v < -detail::arg_grace) throw ValidationError("classical_H: negative weight");
    const double w = std::max(v, 0.0);
    total += w;
    s += eta(w);
  }
  return s - eta(total);
}

/// Extended relative entropy
///   H(A||B) = sum_i <i| (A ln A - A ln B + B - A) |i>
/// over the eigenbasis of A, with +infinity when A has relative weight above
/// 1e-9 outside supp(B). Nonnegative, zero iff A = B, homogeneous.
inline double rel_entropy(const PositiveOperator& a, const PositiveOperator& b) {
  if (a.dim() != b.dim()) throw ValidationError("rel_entropy: dimension mismatch");
  const Spectrum& sa = a.spectrum();
  const Spectrum& sb = b.spectrum();
  const double ta = a.trace();
  const double tb = b.trace();

  // supp(B) = eigenvectors with eigenvalue above a cutoff tied to Tr B.
  const double supp_cut = tol::psd_rel * std::max(tb, 1e-300);

  // |<u_i|v_j>|^2 overlap table.
  const Matrix overlap = sa.basis.adjoint() * sb.basis;

  double off_weight = 0.0;
  for (int j = 0; j < sb.values.size(); ++j) {
    if (sb.values(j) > supp_cut) continue;
    for (int i = 0; i < sa.values.size(); ++i)
      off_weight += sa.values(i) * std::norm(overlap(i, j));
  }
  if (off_weight > tol::support_rel * std::max(ta, 1e-300)) return infinity();

  double value = tb - ta;
  for (int i = 0; i < sa.values.size(); ++i) {
    const double ai = sa.values(i);
    if (ai <= 0.0) continue;
    value += ai * std::log(ai);
    for (int j = 0; j < sb.values.size(); ++j) {
      if (sb.values(j) <= supp_cut) continue;  // weight there is below 1e-9 Tr A
      value -= ai * std::norm(overlap(i, j)) * std::log(sb.values(j));
    }
  }
  // Mathematically >= 0; absorb eigensolver dust.
  if (value < 0.0 && value > -1e-9 * std::max(1.0, ta + tb)) value = 0.0;
  return value;
}

/// k-order coarse-graining of a nonincreasing sequence:
/// out_i = s_{(i-1)k+1} + ... + s_{ik}. Preserves the total.
inline std::vector<double> coarse_grain(const std::vector<double>& s, int k) {
  if (k < 1) throw ValidationError("coarse_grain: k must be >= 1");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] > s[i - 1] + 1e-12)
      throw ValidationError("coarse_grain: input not nonincreasing");
  std::vector<double> out;
  out.reserve((s.size() + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < s.size(); i += static_cast<std::size_t>(k)) {
    double block = 0.0;
    for (std::size_t j = i; j < std::min(s.size(), i + static_cast<std::size_t>(k)); ++j)
      block += s[j];
    out.push_back(block);
  }
  return out;
}

namespace detail {
inline std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}
}  // namespace detail

/// Uhlmann order: q is more chaotic than p iff every leading partial sum of
/// p (sorted nonincreasing) dominates q's. Totals must agree within 1e-10.
inline bool uhlmann_less_chaotic(const std::vector<double>& p,
                                 const std::vector<double>& q) {
  const double tp = std::accumulate(p.begin(), p.end(), 0.0);
  const double tq = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(tp - tq) > 1e-10 * std::max(1.0, std::max(tp, tq)))
    throw ValidationError("uhlmann_less_chaotic: totals differ");
  std::vector<double> ps = detail::sorted_desc(p);
  std::vector<double> qs = detail::sorted_desc(q);
  const std::size_t n = std::max(ps.size(), qs.size());
  double sum_p = 0.0, sum_q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_p += i < ps.size() ? ps[i] : 0.0;
    sum_q += i < qs.size() ? qs[i] : 0.0;
    if (sum_p < sum_q - 1e-10) return false;
  }
  return true;
}

/// Elementwise domination (after nonincreasing sort, zero padding):
/// true iff q_i <= p_i + 1e-12 for all i.
inline bool dominates_elementwise(const std::vector<double>& p,
                                  const std::vector<double>& q) {
  std::vector<double> ps = detail::sorted_desc(p);
  std::vector<double> qs = detail::sorted_desc(q);
  const std::size_t n = std::max(ps.size(), qs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = i < ps.size() ? ps[i] : 0.0;
    const double qi = i < qs.size() ? qs[i] : 0.0;
    if (qi > pi + 1e-12) return false;
  }
  return true;
}

/// Entanglement of a pure state on C^{d1} (x) C^{d2}: the entropy of either
/// reduced operator (they agree by the Schmidt decomposition).
inline double entanglement_pure(const PositiveOperator& omega, int d1, int d2) {
  if (omega.dim() != d1 * d2)
    throw ValidationError("entanglement_pure: dimension mismatch");
  if (std::abs(omega.trace() - 1.0) > 1e-8)
    throw ValidationError("entanglement_pure: state must have unit trace");
  const Spectrum& s = omega.spectrum();
  if (s.values.size() > 1 && s.values(1) > 1e-9)
    throw ValidationError("entanglement_pure: input not rank-1");
  return entropy_H(partial_trace(omega, d1, d2, TensorSide::second));
}

}  // namespace entroscope
