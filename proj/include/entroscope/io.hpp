// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// JSON and CSV serialization. Matrix files are JSON objects
// {"dim": d, "re": [[...]], "im": [[...]]} with "im" omitted for real
// matrices; Hermiticity is validated on load. Ensembles are
// {"weights": [...], "members": [matrix objects]}. Serialization uses
// nlohmann::json, whose sorted keys and shortest-round-trip doubles make
// byte-identical output for identical values.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "entroscope/approximator.hpp"
#include "entroscope/ua_sweep.hpp"

namespace entroscope {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
  Json j;
  j["dim"] = m.rows();
  Json re = Json::array();
  Json im = Json::array();
  bool has_imag = false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re_row.push_back(m(i, k).real());
      im_row.push_back(m(i, k).imag());
      if (m(i, k).imag() != 0.0) has_imag = true;
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  if (has_imag) j["im"] = std::move(im);
  return j;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re"))
    throw IoError("matrix: expected an object with fields dim and re");
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw IoError("matrix: field dim must be positive");
  const Json& re = j.at("re");
  const Json* im = j.contains("im") ? &j.at("im") : nullptr;
  if (static_cast<int>(re.size()) != dim || (im && static_cast<int>(im->size()) != dim))
    throw IoError("matrix: field re/im must have dim rows");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json& re_row = re.at(static_cast<std::size_t>(i));
    if (static_cast<int>(re_row.size()) != dim)
      throw IoError("matrix: field re row " + std::to_string(i) + " must have dim entries");
    for (int k = 0; k < dim; ++k) {
      double imag = 0.0;
      if (im) imag = im->at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
      m(i, k) = Complex(re_row.at(static_cast<std::size_t>(k)).get<double>(), imag);
    }
  }
  return m;
}

inline Json positive_to_json(const PositiveOperator& a) { return matrix_to_json(a.entries()); }

inline PositiveOperator positive_from_json(const Json& j) {
  return PositiveOperator::make(matrix_from_json(j));  // Hermiticity validated inside
}

inline Json ensemble_to_json(const Ensemble& e) {
  Json j;
  j["weights"] = e.weights();
  Json members = Json::array();
  for (const auto& m : e.members()) members.push_back(positive_to_json(m));
  j["members"] = std::move(members);
  return j;
}

inline Ensemble ensemble_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("weights") || !j.contains("members"))
    throw IoError("ensemble: expected an object with fields weights and members");
  std::vector<double> weights = j.at("weights").get<std::vector<double>>();
  std::vector<PositiveOperator> members;
  for (const Json& m : j.at("members")) members.push_back(positive_from_json(m));
  return Ensemble::make(std::move(weights), std::move(members));
}

inline Json approx_config_to_json(const ApproxConfig& cfg) {
  Json j;
  j["k"] = cfg.k;
  j["m"] = cfg.m;
  j["restarts"] = cfg.restarts;
  j["max_iters"] = cfg.max_iters;
  j["step_tolerance"] = cfg.step_tolerance;
  j["seed"] = cfg.seed;
  j["extra_seeds"] = cfg.extra_seeds.size();
  j["refine_seeds"] = cfg.refine_seeds;
  return j;
}

/// Full result with the best ensemble inline and the config echoed, so a run
/// can be replayed from its own output.
inline Json approx_result_to_json(const ApproxResult& res, const ApproxConfig& cfg) {
  Json j;
  j["config"] = approx_config_to_json(cfg);
  j["k"] = res.k;
  j["m_used"] = res.m_used;
  j["hk_lower"] = res.hk_lower;
  j["delta_hat"] = res.delta_hat;
  j["delta_tilde"] = res.delta_tilde;
  j["iterations_used"] = res.iterations_used;
  j["converged"] = res.converged;
  j["best_ensemble"] = ensemble_to_json(res.best_ensemble);
  Json trace = Json::array();
  for (const auto& t : res.trace) {
    Json row;
    row["kind"] = t.kind;
    row["index"] = t.index;
    row["start_value"] = t.start_value;
    row["final_value"] = t.final_value;
    row["sweeps"] = t.sweeps;
    row["converged"] = t.converged;
    trace.push_back(std::move(row));
  }
  j["trace"] = std::move(trace);
  return j;
}

inline Json sweep_table_to_json(const SweepTable& table) {
  Json j;
  j["family"] = table.family_label;
  j["accepted"] = table.accepted;
  j["rejected"] = table.rejected;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r;
    r["k"] = row.k;
    r["samples"] = row.samples;
    r["max_delta_hat"] = row.max_delta_hat;
    r["max_delta_tilde"] = row.max_delta_tilde;
    r["argmax_index"] = row.argmax_index;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline std::string sweep_table_to_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "k,samples,max_delta_hat,max_delta_tilde,argmax_index\n";
  char buf[64];
  for (const auto& row : table.rows) {
    out << row.k << ',' << row.samples << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.max_delta_hat);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", row.max_delta_tilde);
    out << buf << ',' << row.argmax_index << '\n';
  }
  return out.str();
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

inline PositiveOperator load_positive(const std::string& path) {
  return positive_from_json(load_json(path));
}

inline Ensemble load_ensemble(const std::string& path) {
  return ensemble_from_json(load_json(path));
}

}  // namespace entroscope
