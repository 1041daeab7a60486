// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// Batch invariant suites. Each suite runs randomized trials of the module
// invariants and reports per-invariant pass/fail counts with the worst
// slack seen, where slack is the signed violation (lhs - rhs for an
// inequality lhs <= rhs, absolute difference for an identity). A suite
// passes when every worst slack stays at or below its tolerance.

#pragma once

#include <string>
#include <vector>

#include "entroscope/counterexamples.hpp"
#include "entroscope/ua_sweep.hpp"

namespace entroscope {

struct InvariantResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_slack = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct CheckReport {
  std::string suite;
  std::vector<InvariantResult> results;

  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

namespace detail {

class InvariantRecorder {
 public:
  InvariantRecorder(std::string name, double tolerance) : tolerance_(tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
    result_.worst_slack = -infinity();
  }

  void record(double slack) {
    ++result_.trials;
    result_.worst_slack = std::max(result_.worst_slack, slack);
    if (!(slack <= tolerance_)) ++result_.failures;
  }

  InvariantResult finish() {
    result_.pass = result_.failures == 0;
    if (result_.trials == 0) result_.worst_slack = 0.0;
    return result_;
  }

 private:
  double tolerance_;
  InvariantResult result_;
};

inline std::vector<double> random_distribution(int n, SplitMix64& rng) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& v : w) total += (v = rng.uniform_pos());
  for (double& v : w) v /= total;
  return w;
}

inline ApproxConfig light_cfg(int k, std::uint64_t seed, int restarts = 2) {
  ApproxConfig cfg;
  cfg.k = k;
  cfg.restarts = restarts;
  cfg.max_iters = 60;
  cfg.seed = seed;
  return cfg;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suite: entropy-identities

inline CheckReport check_entropy_identities(int trials, int max_dim, std::uint64_t seed,
                                            double tol) {
  CheckReport report;
  report.suite = "entropy-identities";
  detail::InvariantRecorder mixing("eq1-mixing", tol);
  detail::InvariantRecorder sandwich_lo("eq3-sandwich-lower", tol);
  detail::InvariantRecorder sandwich_hi("eq3-sandwich-upper", tol);
  detail::InvariantRecorder identity("eq4-ensemble-identity", tol);
  detail::InvariantRecorder donald("donald-identity", tol);
  detail::InvariantRecorder hom_h("eq2-homogeneity-H", tol);
  detail::InvariantRecorder hom_rel("eq8-homogeneity-rel-entropy", tol);
  detail::InvariantRecorder hom_delta("eq7-homogeneity-gap", tol);
  detail::InvariantRecorder schur("schur-concavity", tol);

  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x656e74, static_cast<std::uint64_t>(trial));
    const int dim = 2 + trial % (max_dim - 1);

    {  // eq1: mixing inequality over states
      const int n = 2 + static_cast<int>(rng.next_u64() % 5);
      std::vector<double> lambda = detail::random_distribution(n, rng);
      Matrix avg = Matrix::Zero(dim, dim);
      double rhs = 0.0;
      for (int i = 0; i < n; ++i) {
        PositiveOperator rho = random_positive(dim, 1 + static_cast<int>(rng.next_u64() % dim),
                                               rng.next_u64());
        avg += lambda[static_cast<std::size_t>(i)] * rho.entries();
        rhs += lambda[static_cast<std::size_t>(i)] * entropy_H(rho) +
               eta(lambda[static_cast<std::size_t>(i)]);
      }
      mixing.record(entropy_H(PositiveOperator::make(std::move(avg))) - rhs);
    }

    {  // eq3: sandwich for A <= B = A + C
      PositiveOperator a =
          random_positive(dim, 1 + static_cast<int>(rng.next_u64() % dim), rng.next_u64())
              .scaled(0.3 + 0.5 * rng.uniform());
      PositiveOperator c =
          random_positive(dim, 1 + static_cast<int>(rng.next_u64() % dim), rng.next_u64())
              .scaled(0.3 + 0.5 * rng.uniform());
      PositiveOperator b = PositiveOperator::make(Matrix(a.entries() + c.entries()));
      const double ha = entropy_H(a), hc = entropy_H(c), hb = entropy_H(b);
      sandwich_lo.record(ha + hc - hb);
      sandwich_hi.record(hb - (ha + hc + b.trace() * h2(a.trace() / b.trace())));
    }

    {  // eq4 and Donald, on an exact decomposition of a full-rank operator
      PositiveOperator a = random_positive(dim, dim, rng.next_u64());
      Ensemble e = hjw_ensemble(a, random_stiefel(2 * dim, a.rank(), rng.next_u64()),
                                BlockPlan::contiguous(dim, 2));
      double lhs = entropy_S(a);
      double rhs = 0.0;
      for (int i = 0; i < e.size(); ++i) {
        lhs -= e.weights()[static_cast<std::size_t>(i)] *
               entropy_S(e.members()[static_cast<std::size_t>(i)]);
        rhs += e.weights()[static_cast<std::size_t>(i)] *
               rel_entropy(e.members()[static_cast<std::size_t>(i)], a);
      }
      identity.record(std::abs(lhs - rhs));

      PositiveOperator b =
          random_positive(dim, dim, rng.next_u64()).scaled(0.4 + rng.uniform());
      double sum_b = 0.0, sum_a = 0.0;
      for (int i = 0; i < e.size(); ++i) {
        sum_b += e.weights()[static_cast<std::size_t>(i)] *
                 rel_entropy(e.members()[static_cast<std::size_t>(i)], b);
        sum_a += e.weights()[static_cast<std::size_t>(i)] *
                 rel_entropy(e.members()[static_cast<std::size_t>(i)], a);
      }
      donald.record(std::abs(sum_b - (sum_a + rel_entropy(a, b))));
    }

    {  // homogeneity, eqs 2 and 8
      PositiveOperator a =
          random_positive(dim, 1 + static_cast<int>(rng.next_u64() % dim), rng.next_u64());
      PositiveOperator b = random_positive(dim, dim, rng.next_u64());
      double worst_h = 0.0, worst_rel = 0.0;
      const double base_rel = rel_entropy(a, b);
      for (double lambda : {0.0, 0.5, 2.0}) {
        worst_h = std::max(worst_h,
                           std::abs(entropy_H(a.scaled(lambda)) - lambda * entropy_H(a)));
        if (lambda > 0.0)
          worst_rel = std::max(
              worst_rel,
              std::abs(rel_entropy(a.scaled(lambda), b.scaled(lambda)) - lambda * base_rel));
      }
      hom_h.record(worst_h);
      hom_rel.record(worst_rel);
    }

    {  // eq7: homogeneity of the estimated gap (scaled run reuses the seed)
      const int k = 1 + static_cast<int>(rng.next_u64() % 2);
      PositiveOperator a = random_positive(std::min(dim, 4), std::min(dim, 4), rng.next_u64());
      ApproxConfig cfg = detail::light_cfg(k, rng.next_u64());
      cfg.step_tolerance = 1e-10;
      const double base = approx_hk(a, cfg).delta_hat;
      double worst = 0.0;
      for (double lambda : {0.5, 2.0})
        worst = std::max(worst,
                         std::abs(approx_hk(a.scaled(lambda), cfg).delta_hat - lambda * base));
      hom_delta.record(worst);
    }

    {  // Schur concavity when the Uhlmann order holds
      const int n = 2 + static_cast<int>(rng.next_u64() % 5);
      std::vector<double> p = detail::random_distribution(n, rng);
      std::vector<double> q = detail::random_distribution(n, rng);
      if (uhlmann_less_chaotic(p, q)) schur.record(classical_H(p) - classical_H(q));
    }
  }

  report.results = {mixing.finish(),  sandwich_lo.finish(), sandwich_hi.finish(),
                    identity.finish(), donald.finish(),      hom_h.finish(),
                    hom_rel.finish(),  hom_delta.finish(),   schur.finish()};
  return report;
}

// ---------------------------------------------------------------------------
// Suite: lemma6 (estimator-level restatements; oracle scale for the
// order/contraction/projector assertions)

inline CheckReport check_lemma6(int trials, int oracle_trials, std::uint64_t seed, double tol,
                                double oracle_tol) {
  CheckReport report;
  report.suite = "lemma6";
  detail::InvariantRecorder nonneg("6a-nonnegative", tol);
  detail::InvariantRecorder zero_set("6b-zero-at-rank-k", tol);
  detail::InvariantRecorder unitary("6b-unitary-invariance", tol);
  detail::InvariantRecorder cap("eq5-log-k-cap", tol);
  detail::InvariantRecorder coarse("6d-coarse-graining-bound", tol);
  detail::InvariantRecorder convexity("6i-product-seed-convexity", tol);
  detail::InvariantRecorder push("6h-push-seed", tol);
  detail::InvariantRecorder mixture("6j-mixture-seed", tol);
  detail::InvariantRecorder monotone("k-monotonicity", tol);

  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x6c3661, static_cast<std::uint64_t>(trial));
    const int dim = 2 + trial % 3;
    const int k = 1 + static_cast<int>(rng.next_u64() % 2);

    {  // 6a, eq5, 6d on a generic run
      PositiveOperator a =
          random_positive(dim, 1 + static_cast<int>(rng.next_u64() % dim), rng.next_u64())
              .scaled(0.4 + rng.uniform());
      ApproxResult res = approx_hk(a, detail::light_cfg(k, rng.next_u64()));
      nonneg.record(-res.delta_hat);
      cap.record(res.hk_lower - a.trace() * std::log(static_cast<double>(k)));
      coarse.record(res.delta_hat - res.delta_tilde);
    }

    {  // 6b zero set: rank(A) <= k
      const int rank = 1 + static_cast<int>(rng.next_u64() % k);
      PositiveOperator a = random_positive(dim, std::min(rank, dim), rng.next_u64());
      ApproxResult res = approx_hk(a, detail::light_cfg(k, rng.next_u64()));
      zero_set.record(res.delta_hat);
    }

    {  // 6b unitary invariance
      PositiveOperator a = random_positive(dim, dim, rng.next_u64());
      Matrix v = random_unitary(dim, rng.next_u64());
      PositiveOperator rot = PositiveOperator::make(Matrix(v * a.entries() * v.adjoint()));
      ApproxConfig cfg = detail::light_cfg(k, 17);
      unitary.record(std::abs(approx_hk(a, cfg).delta_hat - approx_hk(rot, cfg).delta_hat));
    }

    {  // 6i: product-seeded joint convexity
      const int k1 = 1 + static_cast<int>(rng.next_u64() % 2);
      const int k2 = 1 + static_cast<int>(rng.next_u64() % 2);
      const double gamma = 0.2 + 0.6 * rng.uniform();
      PositiveOperator a = random_positive(dim, dim, rng.next_u64());
      PositiveOperator b = random_positive(dim, dim, rng.next_u64());
      ApproxResult res_a = approx_hk(a, detail::light_cfg(k1, rng.next_u64()));
      ApproxResult res_b = approx_hk(b, detail::light_cfg(k2, rng.next_u64()));

      std::vector<double> weights;
      std::vector<PositiveOperator> members;
      const Ensemble& ea = res_a.best_ensemble;
      const Ensemble& eb = res_b.best_ensemble;
      for (int i = 0; i < ea.size(); ++i)
        for (int j = 0; j < eb.size(); ++j) {
          weights.push_back(ea.weights()[static_cast<std::size_t>(i)] *
                            eb.weights()[static_cast<std::size_t>(j)]);
          members.push_back(PositiveOperator::make(
              Matrix(gamma * ea.members()[static_cast<std::size_t>(i)].entries() +
                     (1.0 - gamma) * eb.members()[static_cast<std::size_t>(j)].entries())));
        }
      PositiveOperator mix = PositiveOperator::make(
          Matrix(gamma * a.entries() + (1.0 - gamma) * b.entries()));
      ApproxConfig cfg = detail::light_cfg(k1 + k2, rng.next_u64());
      cfg.extra_seeds.push_back(Ensemble::make_with_average(weights, members, mix));
      ApproxResult res = approx_hk(mix, cfg);
      convexity.record(res.delta_hat -
                       (gamma * res_a.delta_hat + (1.0 - gamma) * res_b.delta_hat));
    }

    {  // 6h: push-seeded data processing
      const int n = 2 + static_cast<int>(rng.next_u64() % 2);
      PositiveOperator a = random_positive(dim, dim, rng.next_u64());
      ApproxResult base = approx_hk(a, detail::light_cfg(k, rng.next_u64()));
      KrausOperation phi = random_kraus(dim, n, rng.next_u64());
      PositiveOperator img = phi.apply(a);
      ApproxConfig cfg = detail::light_cfg(n * k, rng.next_u64());
      cfg.extra_seeds.push_back(push_ensemble(base.best_ensemble, phi));
      ApproxResult res = approx_hk(img, cfg);
      push.record(res.delta_hat - base.delta_hat);
    }

    {  // 6j: mixtures with the first m of M terms retained
      const int terms = 3;
      const int retained = 2;
      std::vector<double> lambda = detail::random_distribution(terms, rng);
      std::vector<PositiveOperator> ops;
      std::vector<ApproxResult> best;
      for (int i = 0; i < terms; ++i) {
        ops.push_back(random_positive(dim, dim, rng.next_u64()));
        best.push_back(approx_hk(ops.back(), detail::light_cfg(k, rng.next_u64())));
      }
      Matrix mix_m = Matrix::Zero(dim, dim);
      for (int i = 0; i < terms; ++i) mix_m += lambda[static_cast<std::size_t>(i)] * ops[static_cast<std::size_t>(i)].entries();
      PositiveOperator mix = PositiveOperator::make(std::move(mix_m));

      // Seed per the chain: heads are the scaled best ensembles, the tail is
      // lumped into one ensemble, and the pieces are product-combined.
      const double tail_mass = lambda[1] + lambda[2];
      std::vector<double> tail_weights;
      std::vector<PositiveOperator> tail_members;
      for (int i = retained - 1; i < terms; ++i)
        for (int j = 0; j < best[static_cast<std::size_t>(i)].best_ensemble.size(); ++j) {
          const Ensemble& e = best[static_cast<std::size_t>(i)].best_ensemble;
          tail_weights.push_back(lambda[static_cast<std::size_t>(i)] / tail_mass *
                                 e.weights()[static_cast<std::size_t>(j)]);
          tail_members.push_back(
              e.members()[static_cast<std::size_t>(j)].scaled(tail_mass));
        }
      std::vector<double> weights;
      std::vector<PositiveOperator> members;
      const Ensemble& head = best[0].best_ensemble;
      for (int i = 0; i < head.size(); ++i)
        for (std::size_t j = 0; j < tail_members.size(); ++j) {
          weights.push_back(head.weights()[static_cast<std::size_t>(i)] * tail_weights[j]);
          members.push_back(PositiveOperator::make(
              Matrix(lambda[0] * head.members()[static_cast<std::size_t>(i)].entries() +
                     tail_members[j].entries())));
        }
      ApproxConfig cfg = detail::light_cfg(retained * k, rng.next_u64());
      cfg.extra_seeds.push_back(Ensemble::make_with_average(weights, members, mix));
      ApproxResult res = approx_hk(mix, cfg);

      double rhs = 0.0;
      for (int i = 0; i < terms; ++i)
        rhs += lambda[static_cast<std::size_t>(i)] * best[static_cast<std::size_t>(i)].delta_hat;
      double sup_tail = 0.0;
      for (int i = retained - 1; i < terms; ++i)
        sup_tail = std::max(sup_tail, ops[static_cast<std::size_t>(i)].trace());
      rhs += sup_tail * classical_H({lambda[1], lambda[2]});
      mixture.record(res.delta_hat - rhs);
    }

    {  // chained k-monotonicity
      PositiveOperator a = random_positive(dim, dim, rng.next_u64());
      ApproxResult prev = approx_hk(a, detail::light_cfg(1, rng.next_u64()));
      double worst = -infinity();
      for (int kk = 2; kk <= 3; ++kk) {
        ApproxConfig cfg = detail::light_cfg(kk, rng.next_u64());
        cfg.extra_seeds.push_back(prev.best_ensemble);
        ApproxResult next = approx_hk(a, cfg);
        worst = std::max(worst, prev.hk_lower - next.hk_lower);
        prev = next;
      }
      monotone.record(worst);
    }
  }

  detail::InvariantRecorder order("6c-operator-order", oracle_tol);
  detail::InvariantRecorder contraction("6e-contraction", oracle_tol);
  detail::InvariantRecorder projectors("6g-projector-superadditivity", oracle_tol);
  for (int trial = 0; trial < oracle_trials; ++trial) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x6c366f, static_cast<std::uint64_t>(trial));
    // Alternate (dim 2, k 1) and (dim 3, k 2): both keep rank(A) > k so the
    // gap is nontrivial.
    const int dim = 2 + trial % 2;
    const int k = dim - 1;
    PositiveOperator b = random_positive(dim, dim, rng.next_u64());
    const double oracle_b = oracle_delta(b, k);

    {  // 6c: A <= B via A = B^{1/2} R B^{1/2}
      Matrix root = sqrt_psd(b);
      Matrix v = random_unitary(dim, rng.next_u64());
      Matrix r = Matrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) r += rng.uniform() * (v.col(i) * v.col(i).adjoint());
      PositiveOperator a = PositiveOperator::make(Matrix(root * r * root));
      order.record(oracle_delta(a, k) - oracle_b);
    }

    {  // 6e: contractions
      Matrix c = random_contraction(dim, rng.next_u64());
      const double norm2 = std::pow(c.jacobiSvd().singularValues()(0), 2);
      PositiveOperator img = PositiveOperator::make(Matrix(c * b.entries() * c.adjoint()));
      contraction.record(oracle_delta(img, k) - norm2 * oracle_b);
    }

    {  // 6g: two-block projector compressions at k = 1, where the compressed
      // blocks still carry entropy
      Matrix v = random_unitary(dim, rng.next_u64());
      const int split = 1 + static_cast<int>(rng.next_u64() % (dim - 1));
      Matrix p1 = v.leftCols(split) * v.leftCols(split).adjoint();
      Matrix p2 = Matrix::Identity(dim, dim) - p1;
      PositiveOperator c1 = PositiveOperator::make(Matrix(p1 * b.entries() * p1));
      PositiveOperator c2 = PositiveOperator::make(Matrix(p2 * b.entries() * p2));
      projectors.record(oracle_delta(c1, 1) + oracle_delta(c2, 1) - oracle_delta(b, 1));
    }
  }

  report.results = {nonneg.finish(),   zero_set.finish(), unitary.finish(),
                    cap.finish(),      coarse.finish(),   convexity.finish(),
                    push.finish(),     mixture.finish(),  monotone.finish(),
                    order.finish(),    contraction.finish(), projectors.finish()};
  return report;
}

// ---------------------------------------------------------------------------
// Suite: lemma11

inline CheckReport check_lemma11(int sequences, std::uint64_t seed) {
  CheckReport report;
  report.suite = "lemma11";
  detail::InvariantRecorder residual("bisection-residual", 1e-12);
  detail::InvariantRecorder flat("flat-sequence-closed-form", 1e-10);
  detail::InvariantRecorder geometric("linear-sequence-limit", 1e-6);
  detail::InvariantRecorder double_ineq("double-inequality", 1e-12);
  detail::InvariantRecorder search("random-search-below-analytic", 1e-9);
  detail::InvariantRecorder tail_lin("linear-tail-decay", 0.0);
  detail::InvariantRecorder tail_log("log-tail-above-one", 0.0);
  detail::InvariantRecorder growth("g-index-tagged-values", 0.0);

  {
    LagrangeSupremum lag = lambda_star({1.0, 1.0, 1.0});
    flat.record(std::abs(lag.lambda - (std::log(3.0) - 1.0)));
    residual.record(lag.residual);
  }
  {
    LagrangeSupremum lag = lambda_star(energy_sequence(GrowthTag::linear, 60));
    geometric.record(std::abs(lag.lambda - (std::log(1.0 + M_E) - 1.0)));
    residual.record(lag.residual);
  }
  for (int s = 0; s < sequences; ++s) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x6c3131, static_cast<std::uint64_t>(s));
    const int n = 3 + static_cast<int>(rng.next_u64() % 40);
    std::vector<double> h(static_cast<std::size_t>(n));
    double acc = 0.2 + rng.uniform();
    for (double& v : h) v = (acc += 0.8 * rng.uniform());
    LagrangeSupremum lag = lambda_star(h);
    residual.record(lag.residual);
    const double tail = lag.value - lag.lambda;
    double_ineq.record(std::max(-tail, tail - 1.0 / h.front()));
    L1BallSupremum sup = l1_ball_sup(h, n, true, rng.next_u64());
    search.record(sup.sampled_max - sup.value);
  }
  {
    const std::vector<double> h = energy_sequence(GrowthTag::linear, 6000);
    double prev = infinity();
    double last = infinity();
    for (int m : {1, 2, 4, 8, 16, 32, 64}) {
      std::vector<double> shifted(h.begin() + (m - 1), h.end());
      const double value = l1_ball_sup(shifted, 4000, false).value;
      tail_lin.record(value - prev);  // must decrease
      prev = value;
      last = value;
    }
    tail_lin.record(last - 0.05);  // and end below 0.05
  }
  {
    const std::vector<double> h = energy_sequence(GrowthTag::logarithmic, 200000);
    double prev = infinity();
    for (int m : {1, 2, 4, 8}) {
      std::vector<double> shifted(h.begin() + (m - 1), h.end());
      const double value = l1_ball_sup(shifted, static_cast<int>(shifted.size()), false).value;
      tail_log.record(value - prev);
      tail_log.record(1.0 - value);  // stays above the analytic growth index 1
      prev = value;
    }
  }
  {
    GIndexEstimate lin = g_index(energy_sequence(GrowthTag::linear, 200), GrowthTag::linear);
    growth.record(std::abs(lin.value));
    GIndexEstimate lg =
        g_index(energy_sequence(GrowthTag::logarithmic, 200), GrowthTag::logarithmic);
    growth.record(std::abs(lg.value - 1.0));
    GIndexEstimate flat_g = g_index(std::vector<double>(100, 0.0), GrowthTag::linear);
    growth.record(flat_g.is_infinite ? 0.0 : 1.0);
  }

  report.results = {residual.finish(), flat.finish(),     geometric.finish(),
                    double_ineq.finish(), search.finish(), tail_lin.finish(),
                    tail_log.finish(),  growth.finish()};
  return report;
}

// ---------------------------------------------------------------------------
// Suite: glo

inline CheckReport check_glo(int trials, int max_dim, int max_terms, std::uint64_t seed,
                             double tol) {
  CheckReport report;
  report.suite = "glo";
  detail::InvariantRecorder glo("glo-inequality", tol);
  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x676c6f, static_cast<std::uint64_t>(trial));
    const int dim = 2 + trial % (max_dim - 1);
    const int n = 2 + static_cast<int>(rng.next_u64() % (max_terms - 1));
    PositiveOperator a =
        random_positive(dim, 1 + static_cast<int>(rng.next_u64() % dim), rng.next_u64())
            .scaled(0.5 + 1.5 * rng.uniform());
    KrausOperation phi = random_kraus(dim, n, rng.next_u64());
    const double h_a = entropy_H(a);
    for (int cut = 1; cut <= n; ++cut) {
      Matrix gram = Matrix::Zero(dim, dim);
      for (int i = 0; i < cut; ++i)
        gram += phi.terms()[static_cast<std::size_t>(i)].adjoint() *
                phi.terms()[static_cast<std::size_t>(i)];
      Matrix c = sqrt_psd(PositiveOperator::make(std::move(gram)));
      const double compressed = entropy_H(PositiveOperator::make(Matrix(c * a.entries() * c)));
      double lhs = 0.0;
      for (int i = cut; i < n; ++i) {
        const Matrix& v = phi.terms()[static_cast<std::size_t>(i)];
        lhs += entropy_H(PositiveOperator::make(Matrix(v * a.entries() * v.adjoint())));
      }
      glo.record(lhs - (h_a - compressed));
    }
  }
  report.results = {glo.finish()};
  return report;
}

// ---------------------------------------------------------------------------
// Suite: ensembles

inline CheckReport check_ensembles(int trials, std::uint64_t seed) {
  CheckReport report;
  report.suite = "ensembles";
  detail::InvariantRecorder reconstruction("hjw-average-reconstruction", tol::ensemble_abs);
  detail::InvariantRecorder nonneg("gap-nonnegative", 0.0);
  detail::InvariantRecorder singleton("gap-zero-for-singleton", 1e-10);
  detail::InvariantRecorder achievability("6d-achievability", 1e-9);
  detail::InvariantRecorder push_avg("push-average-identity", 1e-9);
  detail::InvariantRecorder perturb_valid("perturb-validity", 1e-8);

  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x656e73, static_cast<std::uint64_t>(trial));
    const int dim = 2 + trial % 5;
    const int rank = 1 + static_cast<int>(rng.next_u64() % dim);
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);
    PositiveOperator a = random_positive(dim, rank, rng.next_u64());
    int m = 1 + static_cast<int>(rng.next_u64() % 4);
    while (m * k < rank) ++m;
    Ensemble e = hjw_ensemble(a, random_stiefel(m * k, rank, rng.next_u64()),
                              BlockPlan::contiguous(m, k));
    Matrix sum = Matrix::Zero(dim, dim);
    for (int i = 0; i < e.size(); ++i)
      sum += e.weights()[static_cast<std::size_t>(i)] *
             e.members()[static_cast<std::size_t>(i)].entries();
    reconstruction.record((sum - a.entries()).norm());
    nonneg.record(-ensemble_gap(e));
    singleton.record(ensemble_gap(Ensemble::make_with_average({1.0}, {a}, a)));

    Ensemble coarse = spectral_coarse_ensemble(a, k);
    const RVector& v = a.spectrum().values;
    std::vector<double> sv(v.data(), v.data() + v.size());
    achievability.record(std::abs(ensemble_gap(coarse) - classical_H(coarse_grain(sv, k))));

    KrausOperation phi = random_kraus(dim, 2, rng.next_u64());
    Ensemble pushed = push_ensemble(e, phi);
    Matrix psum = Matrix::Zero(dim, dim);
    for (int i = 0; i < pushed.size(); ++i)
      psum += pushed.weights()[static_cast<std::size_t>(i)] *
              pushed.members()[static_cast<std::size_t>(i)].entries();
    push_avg.record((psum - phi.apply(a).entries()).norm());

    PositiveOperator target = random_positive(dim, dim, rng.next_u64());
    Ensemble moved = perturb_ensemble(e, target);
    Matrix msum = Matrix::Zero(dim, dim);
    double wsum = 0.0;
    for (int i = 0; i < moved.size(); ++i) {
      wsum += moved.weights()[static_cast<std::size_t>(i)];
      msum += moved.weights()[static_cast<std::size_t>(i)] *
              moved.members()[static_cast<std::size_t>(i)].entries();
    }
    perturb_valid.record(std::max(std::abs(wsum - 1.0), (msum - target.entries()).norm()));
  }

  report.results = {reconstruction.finish(), nonneg.finish(),   singleton.finish(),
                    achievability.finish(),  push_avg.finish(), perturb_valid.finish()};
  return report;
}

// ---------------------------------------------------------------------------
// Suite: counterexamples

inline CheckReport check_counterexamples(int specs, std::uint64_t seed) {
  CheckReport report;
  report.suite = "counterexamples";
  detail::InvariantRecorder average("witness-average-identity", 1e-12);
  detail::InvariantRecorder strict("witness-strict-gap", 0.0);
  detail::InvariantRecorder closed("blockdiag-closed-vs-direct", 1e-10);
  detail::InvariantRecorder exhibit("discontinuity-exhibit", 1e-10);

  Remark3Report witness = remark3_witness();
  average.record(
      (witness.ensemble.average().entries() - Matrix::Identity(3, 3) / 3.0).norm());
  strict.record(witness.strict_gap_confirmed ? 0.0 : 1.0);
  strict.record(witness.delta_hat_2 - (witness.delta_tilde_2 - 1e-3));

  for (int trial = 0; trial < specs; ++trial) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x637874, static_cast<std::uint64_t>(trial));
    BlockSequenceSpec spec;
    const int blocks = 1 + static_cast<int>(rng.next_u64() % 5);
    int total = 1;
    for (int b = 0; b < blocks; ++b) {
      const int d = 3 + static_cast<int>(rng.next_u64() % 8);
      if (total + d > 64) break;
      spec.block_dims.push_back(d);
      total += d;
    }
    spec.pi.resize(1 + rng.next_u64() % spec.block_dims.size());
    double sum = 0.0;
    for (double& w : spec.pi) sum += (w = rng.uniform_pos());
    for (double& w : spec.pi) w /= sum;
    closed.record(
        std::abs(blockdiag_entropy_closed_form(spec) - blockdiag_entropy_direct(spec)));
  }

  for (int d = 3; d <= 20; ++d) exhibit.record(1.0 - blockdiag_sigma_entropy(d));
  CVector e0 = CVector::Zero(2);
  e0(0) = 1.0;
  exhibit.record(std::abs(entropy_H(pure_from_vector(e0))));

  report.results = {average.finish(), strict.finish(), closed.finish(), exhibit.finish()};
  return report;
}

}  // namespace entroscope
