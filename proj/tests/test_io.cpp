// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "entroscope/counterexamples.hpp"
#include "entroscope/io.hpp"

using namespace entroscope;

TEST_CASE("real matrices serialize without the im field") {
  PositiveOperator a = PositiveOperator::maximally_mixed(3);
  Json j = positive_to_json(a);
  CHECK(j.at("dim") == 3);
  CHECK_FALSE(j.contains("im"));
  PositiveOperator back = positive_from_json(j);
  CHECK((back.entries() - a.entries()).norm() == 0.0);
}

TEST_CASE("complex matrices round-trip exactly") {
  PositiveOperator a = random_positive(4, 3, 11);
  Json j = positive_to_json(a);
  CHECK(j.contains("im"));
  PositiveOperator back = positive_from_json(j);
  CHECK((back.entries() - a.entries()).norm() == 0.0);
}

TEST_CASE("matrix loading validates Hermiticity and shape") {
  Json bad = {{"dim", 2}, {"re", {{0.0, 1.0}, {0.0, 0.0}}}};
  CHECK_THROWS_AS(positive_from_json(bad), ValidationError);

  Json ragged = {{"dim", 2}, {"re", {{0.0, 1.0}}}};
  CHECK_THROWS_AS(positive_from_json(ragged), IoError);

  Json missing = {{"dim", 2}};
  CHECK_THROWS_AS(positive_from_json(missing), IoError);
}

TEST_CASE("ensembles round-trip through JSON") {
  Ensemble e = remark3_ensemble();
  Json j = ensemble_to_json(e);
  Ensemble back = ensemble_from_json(j);
  REQUIRE(back.size() == e.size());
  for (int i = 0; i < e.size(); ++i) {
    CHECK(back.weights()[static_cast<std::size_t>(i)] ==
          e.weights()[static_cast<std::size_t>(i)]);
    CHECK((back.members()[static_cast<std::size_t>(i)].entries() -
           e.members()[static_cast<std::size_t>(i)].entries())
              .norm() == 0.0);
  }
}

TEST_CASE("approx results echo their config") {
  PositiveOperator a = PositiveOperator::maximally_mixed(3);
  ApproxConfig cfg;
  cfg.k = 2;
  cfg.restarts = 2;
  cfg.seed = 5;
  ApproxResult res = approx_hk(a, cfg);
  Json j = approx_result_to_json(res, cfg);
  CHECK(j.at("config").at("k") == 2);
  CHECK(j.at("config").at("restarts") == 2);
  CHECK(j.at("config").at("seed") == 5);
  CHECK(j.at("hk_lower").get<double>() == res.hk_lower);
  CHECK(j.at("best_ensemble").contains("weights"));
  CHECK(j.at("trace").is_array());
}

TEST_CASE("sweep tables print the pinned CSV header") {
  SweepTable table;
  table.family_label = "test";
  table.rows.push_back({2, 10, 0.25, 0.5, 3});
  const std::string csv = sweep_table_to_csv(table);
  CHECK(csv.rfind("k,samples,max_delta_hat,max_delta_tilde,argmax_index\n", 0) == 0);
  CHECK(csv.find("2,10,0.25,0.5,3\n") != std::string::npos);
}

TEST_CASE("file loading reports IO failures") {
  CHECK_THROWS_AS(load_json("/nonexistent/entroscope.json"), IoError);

  const std::string path =
      (std::filesystem::temp_directory_path() / "entroscope_bad.json").string();
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_json(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("identical values serialize to identical bytes") {
  PositiveOperator a = random_positive(4, 4, 99);
  CHECK(positive_to_json(a).dump() == positive_to_json(a).dump());
  ApproxConfig cfg;
  cfg.k = 2;
  cfg.restarts = 3;
  cfg.seed = 123;
  const std::string one = approx_result_to_json(approx_hk(a, cfg), cfg).dump();
  const std::string two = approx_result_to_json(approx_hk(a, cfg), cfg).dump();
  CHECK(one == two);
}
