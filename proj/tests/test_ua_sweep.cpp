// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include <catch2/catch_amalgamated.hpp>

#include "entroscope/ua_sweep.hpp"

using namespace entroscope;

TEST_CASE("g_index for tagged growth classes") {
  GIndexEstimate lin = g_index(energy_sequence(GrowthTag::linear, 100), GrowthTag::linear);
  CHECK(lin.exact);
  CHECK(lin.value == 0.0);

  GIndexEstimate log = g_index(energy_sequence(GrowthTag::logarithmic, 100), GrowthTag::logarithmic);
  CHECK(log.exact);
  CHECK(log.value == 1.0);

  GIndexEstimate zero = g_index(std::vector<double>(50, 0.0), GrowthTag::linear);
  CHECK(zero.is_infinite);

  CHECK_THROWS_AS(g_index({2.0, 1.0}, GrowthTag::custom), ValidationError);
}

TEST_CASE("g_index custom bracket reports a width") {
  GIndexEstimate est = g_index(energy_sequence(GrowthTag::linear, 4000), GrowthTag::custom);
  CHECK_FALSE(est.exact);
  CHECK_FALSE(est.is_infinite);
  CHECK(est.bracket_lo < est.bracket_hi);
  CHECK(est.bracket_hi <= 0.5);  // linear decay looks convergent well below 1

  GIndexEstimate flat = g_index(std::vector<double>(2000, 1.0), GrowthTag::custom);
  CHECK(flat.is_infinite);  // bounded energies never converge
}

TEST_CASE("lambda_star closed forms") {
  LagrangeSupremum flat = lambda_star({1.0, 1.0, 1.0});
  CHECK(flat.lambda == Catch::Approx(std::log(3.0) - 1.0).margin(1e-10));
  CHECK(flat.residual <= 1e-12);
  // Maximizer is the uniform distribution and the supremum is ln 3.
  for (double x : flat.maximizer) CHECK(x == Catch::Approx(1.0 / 3.0).margin(1e-10));
  CHECK(flat.value == Catch::Approx(std::log(3.0)).margin(1e-10));

  CHECK_THROWS_AS(lambda_star({1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(lambda_star({0.0, 1.0, 2.0}), ValidationError);
}

TEST_CASE("lambda_star for linear energies approaches ln(1+e) - 1") {
  LagrangeSupremum lag = lambda_star(energy_sequence(GrowthTag::linear, 60));
  CHECK(lag.lambda == Catch::Approx(std::log(1.0 + M_E) - 1.0).margin(1e-6));
  CHECK(lag.residual <= 1e-12);
}

TEST_CASE("double inequality holds exactly as decomposed") {
  for (int trial = 0; trial < 20; ++trial) {
    SplitMix64 rng(500 + trial);
    const int n = 3 + trial % 30;
    std::vector<double> h(static_cast<std::size_t>(n));
    double acc = 0.2 + rng.uniform();
    for (double& v : h) v = (acc += rng.uniform());
    LagrangeSupremum lag = lambda_star(h);
    const double tail = lag.value - lag.lambda;  // sum e^{-lambda h_j - 1} / h_j
    REQUIRE(tail >= 0.0);
    REQUIRE(tail <= 1.0 / h.front() + 1e-12);
    REQUIRE(lag.residual <= 1e-12);
  }
}

TEST_CASE("random search never beats the analytic supremum") {
  for (int seq = 0; seq < 5; ++seq) {
    SplitMix64 rng(600 + seq);
    const int n = 3 + seq * 4;
    std::vector<double> h(static_cast<std::size_t>(n));
    double acc = 0.3 + rng.uniform();
    for (double& v : h) v = (acc += 0.5 * rng.uniform());
    L1BallSupremum res = l1_ball_sup(h, n, true, 42 + static_cast<std::uint64_t>(seq));
    REQUIRE(res.grid_checked);
    REQUIRE(res.verified);
    REQUIRE(res.sampled_max <= res.value + 1e-9);
  }
}

TEST_CASE("tail sweep of the linear supremum decays toward zero") {
  const std::vector<double> h = energy_sequence(GrowthTag::linear, 6000);
  double previous = infinity();
  for (int m : {1, 2, 4, 8, 16, 32, 64}) {
    std::vector<double> shifted(h.begin() + (m - 1), h.end());
    L1BallSupremum res = l1_ball_sup(shifted, 4000, false);
    REQUIRE(res.value < previous);
    previous = res.value;
  }
  CHECK(previous < 0.05);
}

TEST_CASE("tail sweep of the logarithmic supremum stays above one") {
  const std::vector<double> h = energy_sequence(GrowthTag::logarithmic, 200000);
  double previous = infinity();
  for (int m : {1, 2, 4, 8}) {
    std::vector<double> shifted(h.begin() + (m - 1), h.end());
    L1BallSupremum res = l1_ball_sup(shifted, static_cast<int>(shifted.size()), false);
    REQUIRE(res.value < previous);
    REQUIRE(res.value >= 1.0);
    previous = res.value;
  }
}

TEST_CASE("energy_ball samples satisfy the constraint") {
  OperatorFamily family = make_energy_ball(12, energy_sequence(GrowthTag::linear, 12), 2.0);
  std::vector<double> h = energy_sequence(GrowthTag::linear, 12);
  for (int idx = 0; idx < 30; ++idx) {
    PositiveOperator sample = family.sample(idx, 9);
    CHECK(sample.trace() == Catch::Approx(1.0).margin(1e-10));
    // Pair the sorted-descending spectrum with ascending energies: this is
    // the minimal rearrangement of the sampler's pairing, so it must also
    // satisfy the bound.
    const RVector& q = sample.spectrum().values;
    double energy = 0.0;
    for (int i = 0; i < 12; ++i) energy += q(i) * h[static_cast<std::size_t>(i)];
    REQUIRE(energy <= 2.0 + 1e-10);
  }
  CHECK(family.attempts->first == 30);

  CHECK_THROWS_AS(make_energy_ball(4, energy_sequence(GrowthTag::linear, 4), 0.5),
                  ValidationError);
}

TEST_CASE("dominated samples sit below the reference operator") {
  PositiveOperator a = random_positive(4, 4, 70).scaled(1.3);
  OperatorFamily family = make_dominated(a);
  for (int idx = 0; idx < 25; ++idx) {
    PositiveOperator b = family.sample(idx, 3);
    Spectrum diff = eigh(HermitianMatrix::make(Matrix(a.entries() - b.entries())));
    REQUIRE(diff.values(diff.dim() - 1) >= -1e-10);
  }
}

TEST_CASE("majorization_dominated spectra are elementwise below") {
  PositiveOperator a = random_positive(4, 4, 71);
  OperatorFamily family = make_majorization_dominated(a);
  const RVector& ref = a.spectrum().values;
  for (int idx = 0; idx < 25; ++idx) {
    PositiveOperator b = family.sample(idx, 3);
    std::vector<double> p(ref.data(), ref.data() + ref.size());
    const RVector& q = b.spectrum().values;
    std::vector<double> qs(q.data(), q.data() + q.size());
    REQUIRE(dominates_elementwise(p, qs));
  }
}

TEST_CASE("scaled by one is the identity on samples") {
  OperatorFamily base = make_dominated(PositiveOperator::maximally_mixed(3));
  OperatorFamily same = make_scaled(base, 1.0);
  for (int idx = 0; idx < 10; ++idx) {
    CHECK((base.sample(idx, 5).entries() - same.sample(idx, 5).entries()).norm() == 0.0);
  }
}

TEST_CASE("scaled by zero produces the zero operator") {
  OperatorFamily zero = make_scaled(make_dominated(PositiveOperator::maximally_mixed(3)), 0.0);
  PositiveOperator z = zero.sample(0, 1);
  CHECK(z.trace() == 0.0);
  ApproxConfig cfg;
  cfg.k = 2;
  cfg.restarts = 1;
  SweepTable table = ua_sweep(zero, {1, 2}, 3, cfg);
  for (const auto& row : table.rows) {
    CHECK(row.max_delta_hat == 0.0);
    CHECK(row.max_delta_tilde == 0.0);
  }
}

TEST_CASE("normalized_rays and minkowski_sum compose") {
  OperatorFamily f = make_scaled(make_dominated(PositiveOperator::maximally_mixed(3)), 0.5);
  OperatorFamily rays = make_normalized_rays(f);
  CHECK(rays.sample(3, 8).trace() == Catch::Approx(1.0).margin(1e-12));

  OperatorFamily sum = make_minkowski_sum(f, f);
  PositiveOperator s = sum.sample(0, 8);
  CHECK(s.dim() == 3);
}

TEST_CASE("kraus_images keeps the trace for trace-preserving sets") {
  OperatorFamily base = make_normalized_rays(make_dominated(PositiveOperator::maximally_mixed(3)));
  OperatorFamily imgs = make_kraus_images(base, 3);
  for (int idx = 0; idx < 10; ++idx)
    CHECK(imgs.sample(idx, 4).trace() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("family grammar round-trips") {
  CHECK(make_family("energy_ball:linear:2.0", 6).label == "energy_ball");
  CHECK(make_family("dominated:maxmixed", 4).label == "dominated");
  CHECK(make_family("dominated:rank:2", 4).sample(0, 1).rank() <= 2);
  CHECK(make_family("mixtures:3:(dominated:maxmixed)", 4).label == "mixtures");
  CHECK(make_family("kraus_images:2:(energy_ball:linear:2.0)", 4).label == "kraus_images");
  CHECK(make_family("scaled:(dominated:maxmixed):0.5", 4).sample(0, 1).trace() <= 0.5 + 1e-12);
  CHECK(make_family("minkowski_sum:(dominated:maxmixed):(dominated:rank:1)", 4).label ==
        "minkowski_sum");
  CHECK(make_family("normalized_rays:(dominated:maxmixed)", 4).label == "normalized_rays");

  CHECK_THROWS_AS(make_family("unknown_thing:1", 4), ValidationError);
  CHECK_THROWS_AS(make_family("energy_ball:cubic:2.0", 4), ValidationError);
  CHECK_THROWS_AS(make_family("mixtures:0:(dominated:maxmixed)", 4), ValidationError);
  CHECK_THROWS_AS(make_family("scaled:(dominated:maxmixed", 4), ValidationError);
}

TEST_CASE("rank-capped families sweep to zero") {
  OperatorFamily family =
      make_normalized_rays(make_dominated(random_positive(5, 2, 77)));
  ApproxConfig cfg;
  cfg.restarts = 1;
  cfg.seed = 3;
  SweepTable table = ua_sweep(family, {2, 3}, 10, cfg);
  for (const auto& row : table.rows) {
    CHECK(row.max_delta_hat <= 1e-12);
    CHECK(row.max_delta_tilde <= 1e-12);
  }
}

TEST_CASE("energy_ball sweep has decreasing coarse-graining maxima") {
  OperatorFamily family = make_energy_ball(12, energy_sequence(GrowthTag::linear, 12), 2.0);
  ApproxConfig cfg;
  cfg.restarts = 1;
  cfg.max_iters = 4;
  cfg.seed = 11;
  SweepTable table = ua_sweep(family, {1, 2, 4, 8}, 25, cfg);
  REQUIRE(table.rows.size() == 4);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    REQUIRE(row.max_delta_hat <= row.max_delta_tilde + 1e-12);
    if (i > 0) REQUIRE(row.max_delta_tilde < table.rows[i - 1].max_delta_tilde);
  }
  CHECK(table.accepted == 4 * 25);
}

TEST_CASE("sweep tables are deterministic and sorted by k") {
  OperatorFamily family = make_dominated(PositiveOperator::maximally_mixed(3));
  ApproxConfig cfg;
  cfg.restarts = 2;
  cfg.seed = 21;
  SweepTable t1 = ua_sweep(family, {3, 1, 2}, 5, cfg);
  SweepTable t2 = ua_sweep(family, {1, 2, 3}, 5, cfg);
  REQUIRE(t1.rows.size() == t2.rows.size());
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i].k == t2.rows[i].k);
    CHECK(t1.rows[i].max_delta_hat == t2.rows[i].max_delta_hat);
    CHECK(t1.rows[i].max_delta_tilde == t2.rows[i].max_delta_tilde);
    CHECK(t1.rows[i].argmax_index == t2.rows[i].argmax_index);
  }
}
