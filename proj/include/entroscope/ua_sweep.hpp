// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// Uniform-approximation diagnostics: samplable operator families built from
// the set operations that preserve the UA property, the growth index of an
// energy sequence, and the classical supremum of sum eta(x_j)/h_j over the
// positive part of the l1 unit ball.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "entroscope/approximator.hpp"

namespace entroscope {

// ---------------------------------------------------------------------------
// Energy sequences and the growth index

enum class GrowthTag { linear, logarithmic, custom };

/// h_j = j (1-based) or h_j = ln(j+1), materialized to a finite truncation.
inline std::vector<double> energy_sequence(GrowthTag tag, int length, double scale = 1.0) {
  if (length < 1) throw ValidationError("energy_sequence: empty truncation");
  std::vector<double> h(static_cast<std::size_t>(length));
  for (int j = 1; j <= length; ++j)
    h[static_cast<std::size_t>(j - 1)] =
        tag == GrowthTag::logarithmic ? scale * std::log(static_cast<double>(j) + 1.0)
                                      : scale * static_cast<double>(j);
  return h;
}

struct GIndexEstimate {
  double value = 0.0;       // point value when exact, bracket midpoint otherwise
  bool is_infinite = false;  // no lambda makes the series converge
  bool exact = false;        // analytic value for a tagged growth class
  double bracket_lo = 0.0;   // largest probed lambda that still diverges
  double bracket_hi = 0.0;   // smallest probed lambda that converges
};

/// Growth index g({h_j}) = inf { lambda > 0 : sum e^{-lambda h_j} < inf }.
/// Tagged growth classes get the analytic value (linear slope c > 0 -> 0,
/// logarithmic -> 1, bounded -> +infinity). Custom sequences get a bracket
/// from partial-sum divergence probes; divergence of a series is not
/// decidable from a finite truncation, so no point estimate is claimed.
inline GIndexEstimate g_index(const std::vector<double>& h, GrowthTag tag,
                              const std::vector<double>& probe_grid = {}) {
  if (h.empty()) throw ValidationError("g_index: empty sequence");
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    if (h[i + 1] < h[i] - 1e-12) throw ValidationError("g_index: sequence not nondecreasing");
  for (double v : h)
    if (v < 0.0) throw ValidationError("g_index: negative energy");

  GIndexEstimate out;
  if (tag == GrowthTag::linear) {
    const double slope =
        h.size() > 1 ? (h.back() - h.front()) / static_cast<double>(h.size() - 1) : h.front();
    out.exact = true;
    if (slope <= 1e-15) {
      out.is_infinite = true;  // bounded sequence: sum e^{-lambda h} has no finite tail
      out.value = infinity();
    } else {
      out.value = 0.0;
    }
    return out;
  }
  if (tag == GrowthTag::logarithmic) {
    out.exact = true;
    out.value = 1.0;
    out.bracket_lo = out.bracket_hi = 1.0;
    return out;
  }

  std::vector<double> grid = probe_grid;
  if (grid.empty())
    grid = {0.01, 0.03, 0.1, 0.3, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0};
  std::sort(grid.begin(), grid.end());
  const std::size_t n = h.size();
  double lo = 0.0;
  double hi = infinity();
  for (double lambda : grid) {
    if (lambda <= 0.0) throw ValidationError("g_index: probe lambda must be positive");
    double head = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double term = std::exp(-lambda * h[j]);
      (j < n / 2 ? head : tail) += term;
    }
    // The second half of a convergent series contributes a vanishing share.
    const bool converges = tail <= 1e-6 * (1.0 + head);
    if (converges) {
      hi = std::min(hi, lambda);
    } else {
      lo = std::max(lo, lambda);
    }
  }
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  if (std::isinf(hi)) {
    out.is_infinite = true;
    out.value = infinity();
  } else {
    out.value = 0.5 * (lo + hi);
  }
  return out;
}

struct LagrangeSupremum {
  double lambda = 0.0;            // solution of sum e^{-lambda h_j} = e
  double residual = 0.0;          // |sum e^{-lambda h_j} - e| at the solution
  std::vector<double> maximizer;  // x_j = e^{-lambda h_j - 1}
  double value = 0.0;             // lambda + sum e^{-lambda h_j - 1} / h_j
};

/// Solves sum_{j=1}^n e^{-lambda h_j} = e by bisection (residual <= 1e-12)
/// and returns the Lagrange maximizer of sum eta(x_j)/h_j on the positive
/// part of the l1 unit ball together with the supremum value. Requires all
/// h_j > 0 and n >= 3 (for n <= 2 the equation has no nonnegative solution).
inline LagrangeSupremum lambda_star(const std::vector<double>& h) {
  const std::size_t n = h.size();
  for (double v : h)
    if (v <= 0.0) throw ValidationError("lambda_star: energies must be positive");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (h[i + 1] < h[i] - 1e-12)
      throw ValidationError("lambda_star: sequence not nondecreasing");
  if (static_cast<double>(n) <= M_E)
    throw ValidationError(
        "lambda_star: truncation too short, need at least 3 terms for a solution");

  const auto sum_at = [&](double lambda) {
    double s = 0.0;
    for (double v : h) s += std::exp(-lambda * v);
    return s;
  };

  double lo = 0.0;                      // sum = n > e
  double hi = 1.0;
  while (sum_at(hi) > M_E) hi *= 2.0;   // decreasing in lambda
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double s = sum_at(mid);
    if (std::abs(s - M_E) <= 1e-13) break;
    (s > M_E ? lo : hi) = mid;
  }

  LagrangeSupremum out;
  out.lambda = mid;
  out.residual = std::abs(sum_at(mid) - M_E);
  out.maximizer.resize(n);
  double tail = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.maximizer[j] = std::exp(-mid * h[j] - 1.0);
    tail += out.maximizer[j] / h[j];
  }
  out.value = mid + tail;
  return out;
}

struct L1BallSupremum {
  double value = 0.0;        // analytic supremum
  double lambda = 0.0;
  double sampled_max = 0.0;  // best of the random-search probes (when run)
  bool grid_checked = false;
  bool verified = true;      // random search never beat the analytic value + 1e-9
};

/// Analytic supremum of sum eta(x_j)/h_j over the positive l1 unit ball for
/// the first n entries of h; with grid_check, 5000 random points (simplex
/// surface and interior) probe that no sample exceeds the value + 1e-9.
inline L1BallSupremum l1_ball_sup(const std::vector<double>& h, int n, bool grid_check,
                                  std::uint64_t seed = 0) {
  if (n < 1 || static_cast<std::size_t>(n) > h.size())
    throw ValidationError("l1_ball_sup: invalid truncation length");
  std::vector<double> head(h.begin(), h.begin() + n);
  LagrangeSupremum lag = lambda_star(head);
  L1BallSupremum out;
  out.value = lag.value;
  out.lambda = lag.lambda;
  if (!grid_check) return out;

  out.grid_checked = true;
  SplitMix64 rng = SplitMix64::derive(seed, 0x6c3162);  // "l1b"
  double best = 0.0;
  for (int trial = 0; trial < 5000; ++trial) {
    // Exponential spacings give a uniform simplex point; scaling by u keeps
    // interior points in play.
    double total = 0.0;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) total += (v = -std::log(rng.uniform_pos()));
    double scale = trial % 2 == 0 ? 1.0 : rng.uniform();
    double objective = 0.0;
    for (int j = 0; j < n; ++j)
      objective += eta(x[static_cast<std::size_t>(j)] / total * scale) /
                   head[static_cast<std::size_t>(j)];
    best = std::max(best, objective);
  }
  out.sampled_max = best;
  out.verified = best <= out.value + 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Operator families

/// A deterministic sampler over a structured subset of the positive cone:
/// sample(index, seed) must depend on nothing else.
struct OperatorFamily {
  std::string label;
  std::string description;
  std::function<PositiveOperator(int, std::uint64_t)> sample;
  // Rejection bookkeeping for samplers that use it (energy_ball).
  std::shared_ptr<std::pair<long, long>> attempts;  // {accepted, rejected}
};

namespace detail {
inline std::vector<double> random_simplex_point(int n, SplitMix64& rng,
                                                const std::vector<double>& tilt) {
  std::vector<double> x(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = -std::log(rng.uniform_pos());
    x[static_cast<std::size_t>(i)] = g * (tilt.empty() ? 1.0 : tilt[static_cast<std::size_t>(i)]);
    total += x[static_cast<std::size_t>(i)];
  }
  for (double& v : x) v /= total;
  return x;
}
}  // namespace detail

/// Unit-trace operators whose spectra satisfy sum h_i pi_i <= bound, placed
/// in Haar-random bases. Proposals are drawn from an exponentially tilted
/// simplex distribution chosen so the constraint is typically met, then
/// rejected exactly; the acceptance counter on the family reports the rate.
inline OperatorFamily make_energy_ball(int dim, std::vector<double> h, double bound) {
  if (dim < 1) throw ValidationError("energy_ball: dim must be positive");
  if (static_cast<int>(h.size()) != dim)
    throw ValidationError("energy_ball: energy sequence length must equal dim");
  if (bound <= 0.0) throw ValidationError("energy_ball: bound must be positive");
  double h_min = h.front();
  for (double v : h) h_min = std::min(h_min, v);
  if (bound < h_min)
    throw ValidationError("energy_ball: bound below the minimal energy, set is empty");

  // Exponential tilt e^{-beta h_i} with beta chosen so the proposal's mean
  // energy sits at ~60% of the bound (beta = 0 when unconstrained already).
  double beta = 0.0;
  {
    const auto mean_energy = [&](double b) {
      double num = 0.0, den = 0.0;
      for (double v : h) {
        const double w = std::exp(-b * (v - h_min));
        num += v * w;
        den += w;
      }
      return num / den;
    };
    const double target = h_min + 0.6 * (bound - h_min);
    if (mean_energy(0.0) > target) {
      double lo = 0.0, hi = 1.0;
      while (mean_energy(hi) > target && hi < 1e6) hi *= 2.0;
      for (int iter = 0; iter < 100; ++iter) {
        beta = 0.5 * (lo + hi);
        (mean_energy(beta) > target ? lo : hi) = beta;
      }
    }
  }
  std::vector<double> tilt(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) tilt[i] = std::exp(-beta * (h[i] - h_min));

  OperatorFamily family;
  family.label = "energy_ball";
  std::ostringstream desc;
  desc << "spectra with sum h_i pi_i <= " << bound << " in random bases (tilt beta=" << beta
       << ")";
  family.description = desc.str();
  family.attempts = std::make_shared<std::pair<long, long>>(0, 0);
  auto attempts = family.attempts;
  family.sample = [dim, h, bound, tilt, attempts](int index, std::uint64_t seed) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      SplitMix64 rng = SplitMix64::derive(seed, 0x656e62, static_cast<std::uint64_t>(index),
                                          static_cast<std::uint64_t>(attempt));
      std::vector<double> pi = detail::random_simplex_point(dim, rng, tilt);
      double energy = 0.0;
      for (int i = 0; i < dim; ++i) energy += h[static_cast<std::size_t>(i)] * pi[static_cast<std::size_t>(i)];
      if (energy > bound) {
        ++attempts->second;
        continue;
      }
      ++attempts->first;
      Matrix v = random_unitary(dim, rng.next_u64());
      Matrix out = Matrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i)
        out += pi[static_cast<std::size_t>(i)] * (v.col(i) * v.col(i).adjoint());
      return PositiveOperator::make(std::move(out));
    }
    throw ValidationError("energy_ball: rejection sampling failed to find a feasible spectrum");
  };
  return family;
}

/// Operators 0 <= B <= A, sampled as B = A^{1/2} R A^{1/2} with 0 <= R <= I.
inline OperatorFamily make_dominated(const PositiveOperator& a) {
  OperatorFamily family;
  family.label = "dominated";
  family.description = "operators below a fixed A in the operator order";
  Matrix root = sqrt_psd(a);
  const int dim = a.dim();
  family.sample = [root, dim](int index, std::uint64_t seed) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x646f6d, static_cast<std::uint64_t>(index));
    Matrix v = random_unitary(dim, rng.next_u64());
    Matrix r = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) r += rng.uniform() * (v.col(i) * v.col(i).adjoint());
    return PositiveOperator::make(Matrix(root * r * root));
  };
  return family;
}

/// Operators whose sorted spectrum lies elementwise below lambda(A), in
/// random bases.
inline OperatorFamily make_majorization_dominated(const PositiveOperator& a) {
  OperatorFamily family;
  family.label = "majorization_dominated";
  family.description = "spectra elementwise below the spectrum of a fixed A, random bases";
  const RVector spectrum = a.spectrum().values;
  const int dim = a.dim();
  family.sample = [spectrum, dim](int index, std::uint64_t seed) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x6d6a64, static_cast<std::uint64_t>(index));
    Matrix v = random_unitary(dim, rng.next_u64());
    Matrix out = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      out += rng.uniform() * spectrum(i) * (v.col(i) * v.col(i).adjoint());
    return PositiveOperator::make(std::move(out));
  };
  return family;
}

/// m-fold convex combinations of base-family samples (bases cycled).
inline OperatorFamily make_mixtures(std::vector<OperatorFamily> bases, int m) {
  if (bases.empty()) throw ValidationError("mixtures: need at least one base family");
  if (m < 1) throw ValidationError("mixtures: m must be >= 1");
  OperatorFamily family;
  family.label = "mixtures";
  family.description = "convex combinations of " + std::to_string(m) + " base samples";
  family.sample = [bases, m](int index, std::uint64_t seed) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x6d6978, static_cast<std::uint64_t>(index));
    std::vector<double> w = detail::random_simplex_point(m, rng, {});
    Matrix out;
    for (int j = 0; j < m; ++j) {
      const OperatorFamily& base = bases[static_cast<std::size_t>(j) % bases.size()];
      PositiveOperator sample = base.sample(index * m + j, rng.next_u64());
      if (j == 0)
        out = w[static_cast<std::size_t>(j)] * sample.entries();
      else
        out += w[static_cast<std::size_t>(j)] * sample.entries();
    }
    return PositiveOperator::make(std::move(out));
  };
  return family;
}

/// Images of base samples under random n-term trace-preserving Kraus sets.
inline OperatorFamily make_kraus_images(OperatorFamily base, int n) {
  if (n < 1) throw ValidationError("kraus_images: n must be >= 1");
  OperatorFamily family;
  family.label = "kraus_images";
  family.description = "images under random " + std::to_string(n) + "-term Kraus sets";
  family.sample = [base, n](int index, std::uint64_t seed) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x6b7273, static_cast<std::uint64_t>(index));
    PositiveOperator sample = base.sample(index, rng.next_u64());
    KrausOperation phi = random_kraus(sample.dim(), n, rng.next_u64());
    return phi.apply(sample);
  };
  return family;
}

/// Minkowski sums A + B of two families' samples.
inline OperatorFamily make_minkowski_sum(OperatorFamily f, OperatorFamily g) {
  OperatorFamily family;
  family.label = "minkowski_sum";
  family.description = "sums of one sample from each operand family";
  family.sample = [f, g](int index, std::uint64_t seed) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x6d6b73, static_cast<std::uint64_t>(index));
    PositiveOperator a = f.sample(index, rng.next_u64());
    PositiveOperator b = g.sample(index, rng.next_u64());
    return PositiveOperator::make(Matrix(a.entries() + b.entries()));
  };
  return family;
}

/// Scalar multiples lambda A of a family's samples, lambda >= 0.
inline OperatorFamily make_scaled(OperatorFamily f, double lambda) {
  if (lambda < 0.0) throw ValidationError("scaled: lambda must be nonnegative");
  OperatorFamily family;
  family.label = "scaled";
  family.description = "samples scaled by " + std::to_string(lambda);
  family.sample = [f, lambda](int index, std::uint64_t seed) {
    return f.sample(index, seed).scaled(lambda);
  };
  return family;
}

/// Trace-normalized rays A / ||A||_1 of a family's samples.
inline OperatorFamily make_normalized_rays(OperatorFamily f) {
  OperatorFamily family;
  family.label = "normalized_rays";
  family.description = "samples normalized to unit trace";
  family.sample = [f](int index, std::uint64_t seed) {
    PositiveOperator a = f.sample(index, seed);
    if (a.trace() <= tol::drop_trace)
      throw ValidationError("normalized_rays: sample has zero trace");
    return a.scaled(1.0 / a.trace());
  };
  return family;
}

// ---------------------------------------------------------------------------
// Family grammar (used by the CLI): colon-separated heads with parenthesized
// sub-family arguments, e.g.
//   energy_ball:linear:2.0
//   dominated:maxmixed | dominated:rank:2
//   mixtures:3:(dominated:maxmixed)
//   kraus_images:2:(energy_ball:linear:2.0)
//   minkowski_sum:(scaled:(dominated:maxmixed):0.5):(dominated:rank:1)
//   scaled:(energy_ball:linear:2.0):0.25
//   normalized_rays:(dominated:maxmixed)

namespace detail {
inline std::vector<std::string> split_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : spec) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ':' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (depth != 0) throw ValidationError("family spec: unbalanced parentheses in '" + spec + "'");
  return parts;
}

inline std::string strip_parens(const std::string& s) {
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') return s.substr(1, s.size() - 2);
  return s;
}

inline double parse_number(const std::string& s, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("family spec: field '" + field + "' is not a number: '" + s + "'");
  }
}
}  // namespace detail

inline OperatorFamily make_family(const std::string& spec, int dim, std::uint64_t seed = 0);

namespace detail {
inline PositiveOperator base_operator(const std::string& token, int dim, std::uint64_t seed) {
  if (token == "maxmixed") return PositiveOperator::maximally_mixed(dim);
  throw ValidationError("family spec: unknown base operator '" + token +
                        "' (expected maxmixed, rank:<r>, or file:<path> via the CLI)");
}
}  // namespace detail

/// Parses the family grammar above. `dim` fixes the operator dimension;
/// `seed` derives the fixed reference operators (dominated:rank:<r>).
inline OperatorFamily make_family(const std::string& spec, int dim, std::uint64_t seed) {
  const std::vector<std::string> parts = detail::split_spec(spec);
  const std::string& head = parts.front();
  const auto expect_args = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw ValidationError("family spec: '" + head + "' expects " + std::to_string(n) +
                            " argument(s)");
  };

  if (head == "energy_ball") {
    expect_args(2);
    GrowthTag tag;
    if (parts[1] == "linear")
      tag = GrowthTag::linear;
    else if (parts[1] == "log")
      tag = GrowthTag::logarithmic;
    else
      throw ValidationError("family spec: energy_ball growth must be linear or log, got '" +
                            parts[1] + "'");
    const double bound = detail::parse_number(parts[2], "bound");
    return make_energy_ball(dim, energy_sequence(tag, dim), bound);
  }
  if (head == "dominated" || head == "majorization_dominated") {
    PositiveOperator a = PositiveOperator::maximally_mixed(dim);
    if (parts.size() == 2 && parts[1] == "maxmixed") {
      // keep a
    } else if (parts.size() == 3 && parts[1] == "rank") {
      const int r = static_cast<int>(detail::parse_number(parts[2], "rank"));
      a = random_positive(dim, r, SplitMix64::derive(seed, 0x626173).next_u64());
    } else {
      expect_args(1);
      a = detail::base_operator(parts[1], dim, seed);
    }
    return head == "dominated" ? make_dominated(a) : make_majorization_dominated(a);
  }
  if (head == "mixtures") {
    expect_args(2);
    const int m = static_cast<int>(detail::parse_number(parts[1], "m"));
    return make_mixtures({make_family(detail::strip_parens(parts[2]), dim, seed)}, m);
  }
  if (head == "kraus_images") {
    expect_args(2);
    const int n = static_cast<int>(detail::parse_number(parts[1], "n"));
    return make_kraus_images(make_family(detail::strip_parens(parts[2]), dim, seed), n);
  }
  if (head == "minkowski_sum") {
    expect_args(2);
    return make_minkowski_sum(make_family(detail::strip_parens(parts[1]), dim, seed),
                              make_family(detail::strip_parens(parts[2]), dim, seed));
  }
  if (head == "scaled") {
    expect_args(2);
    return make_scaled(make_family(detail::strip_parens(parts[1]), dim, seed),
                       detail::parse_number(parts[2], "lambda"));
  }
  if (head == "normalized_rays") {
    expect_args(1);
    return make_normalized_rays(make_family(detail::strip_parens(parts[1]), dim, seed));
  }
  throw ValidationError(
      "family spec: unknown head '" + head +
      "' (expected energy_ball | dominated | majorization_dominated | mixtures | "
      "kraus_images | minkowski_sum | scaled | normalized_rays)");
}

// ---------------------------------------------------------------------------
// The sweep

struct SweepRow {
  int k = 0;
  int samples = 0;
  double max_delta_hat = 0.0;
  double max_delta_tilde = 0.0;
  int argmax_index = 0;  // sample index attaining max_delta_hat
};

struct SweepTable {
  std::string family_label;
  std::vector<SweepRow> rows;
  long accepted = 0;
  long rejected = 0;
};

/// Empirical sup of the gap over sampled operators, per k. The same sample
/// set is used for every k (the sampler depends only on index and seed), so
/// the delta_tilde column is nonincreasing in k row by row. cfg.m == 0 picks
/// the smallest block count that can hold the rank, which is all the
/// mandatory coarse seed needs; set cfg.m explicitly for deeper searches.
inline SweepTable ua_sweep(const OperatorFamily& family, std::vector<int> ks, int samples,
                           const ApproxConfig& cfg) {
  if (samples < 1) throw ValidationError("ua_sweep: samples must be >= 1");
  if (ks.empty()) throw ValidationError("ua_sweep: no k values given");
  std::sort(ks.begin(), ks.end());
  SweepTable table;
  table.family_label = family.label;
  for (int k : ks) {
    if (k < 1) throw ValidationError("ua_sweep: k must be >= 1");
    SweepRow row;
    row.k = k;
    row.samples = samples;
    for (int idx = 0; idx < samples; ++idx) {
      PositiveOperator sample = family.sample(idx, cfg.seed);
      ApproxConfig local = cfg;
      local.k = k;
      if (local.m == 0) local.m = std::max(2, (sample.dim() + k - 1) / k);
      ApproxResult res = approx_hk(sample, local);
      if (res.delta_hat > row.max_delta_hat) {
        row.max_delta_hat = res.delta_hat;
        row.argmax_index = idx;
      }
      row.max_delta_tilde = std::max(row.max_delta_tilde, res.delta_tilde);
    }
    table.rows.push_back(row);
  }
  if (family.attempts) {
    table.accepted = family.attempts->first;
    table.rejected = family.attempts->second;
  }
  return table;
}

}  // namespace entroscope
