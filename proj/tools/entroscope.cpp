// This file is part of entroscope.
//
// Licensed under the Apache License, Version 2.0. See the LICENSE file in
// the repository root for details.
//
// Command-line front end. Every subcommand prints one JSON run record to
// stdout: {"command", "params", "seed", "version", "payload", "sidecar"}.
// The payload is byte-identical across reruns of the same command line;
// wall time lives in the sidecar. Exit codes: 0 success, 1 invariant
// failure, 2 validation error, 3 I/O error.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entroscope/entroscope.hpp"

namespace {

using namespace entroscope;

constexpr const char* kVersion = "0.1.0";

Json run_record(const std::string& command, Json params, std::uint64_t seed, Json payload,
                double wall_seconds) {
  Json record;
  record["command"] = command;
  record["params"] = std::move(params);
  record["seed"] = seed;
  record["version"] = kVersion;
  record["payload"] = std::move(payload);
  record["sidecar"] = {{"wall_time_s", wall_seconds}};
  return record;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json finite_or_inf(double v) {
  if (std::isinf(v)) return Json("inf");
  return Json(v);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError(flag + ": expected a comma-separated integer list, got '" + text +
                            "'");
    }
  }
  if (out.empty()) throw ValidationError(flag + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError(flag + ": expected a comma-separated number list, got '" + text +
                            "'");
    }
  }
  if (out.empty()) throw ValidationError(flag + ": empty list");
  return out;
}

// --- entropy ---------------------------------------------------------------

int cmd_entropy(const std::string& path_a, const std::string& path_b, bool pretty) {
  Stopwatch watch;
  PositiveOperator a = load_positive(path_a);
  Json payload;
  payload["trace"] = a.trace();
  payload["S"] = entropy_S(a);
  payload["H"] = entropy_H(a);
  std::vector<double> spectrum(a.spectrum().values.data(),
                               a.spectrum().values.data() + a.dim());
  payload["spectrum"] = spectrum;
  if (!path_b.empty()) {
    PositiveOperator b = load_positive(path_b);
    payload["rel_entropy"] = finite_or_inf(rel_entropy(a, b));
  }
  Json params = {{"matrix", path_a}};
  if (!path_b.empty()) params["second"] = path_b;
  Json record = run_record("entropy", params, 0, payload, watch.seconds());
  std::cout << record.dump(2) << "\n";
  if (pretty) {
    std::cerr << "trace        " << a.trace() << "\n"
              << "S            " << entropy_S(a) << "\n"
              << "H            " << entropy_H(a) << "\n";
    if (payload.contains("rel_entropy"))
      std::cerr << "H(A||B)      " << payload["rel_entropy"].dump() << "\n";
  }
  return 0;
}

// --- approx ----------------------------------------------------------------

int cmd_approx(const std::string& path, int k, int m, int restarts, int max_iters,
               std::uint64_t seed, bool chain, const std::string& seed_ensemble_path,
               bool pretty) {
  Stopwatch watch;
  PositiveOperator a = load_positive(path);
  std::vector<Ensemble> file_seeds;
  if (!seed_ensemble_path.empty()) file_seeds.push_back(load_ensemble(seed_ensemble_path));

  Json params = {{"matrix", path},       {"k", k},         {"m", m},
                 {"restarts", restarts}, {"chain", chain}, {"max_iters", max_iters},
                 {"seed_ensemble", seed_ensemble_path}};

  Json payload;
  if (!chain) {
    ApproxConfig cfg;
    cfg.k = k;
    cfg.m = m;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    cfg.extra_seeds = file_seeds;
    ApproxResult res = approx_hk(a, cfg);
    payload = approx_result_to_json(res, cfg);
    if (pretty)
      std::cerr << "k=" << k << "  hk_lower=" << res.hk_lower << "  delta_hat=" << res.delta_hat
                << "  delta_tilde=" << res.delta_tilde << "\n";
  } else {
    Json runs = Json::array();
    std::vector<Ensemble> carried;
    for (int kk = 1; kk <= k; ++kk) {
      ApproxConfig cfg;
      cfg.k = kk;
      cfg.m = m;
      cfg.restarts = restarts;
      cfg.max_iters = max_iters;
      cfg.seed = seed;
      cfg.extra_seeds = carried;
      for (const Ensemble& e : file_seeds)
        if (e.max_member_rank() <= kk) cfg.extra_seeds.push_back(e);
      ApproxResult res = approx_hk(a, cfg);
      carried = {res.best_ensemble};
      runs.push_back(approx_result_to_json(res, cfg));
      if (pretty)
        std::cerr << "k=" << kk << "  hk_lower=" << res.hk_lower
                  << "  delta_hat=" << res.delta_hat << "  delta_tilde=" << res.delta_tilde
                  << "\n";
    }
    payload["chain"] = std::move(runs);
  }
  Json record = run_record("approx", params, seed, payload, watch.seconds());
  std::cout << record.dump(2) << "\n";
  return 0;
}

// --- sweep -----------------------------------------------------------------

int cmd_sweep(const std::string& family_spec, int dim, const std::string& ks_text, int samples,
              int restarts, int m, std::uint64_t seed, const std::string& csv_path,
              bool pretty) {
  Stopwatch watch;
  std::vector<int> ks = parse_int_list(ks_text, "--ks");
  OperatorFamily family = make_family(family_spec, dim, seed);
  ApproxConfig cfg;
  cfg.restarts = restarts;
  cfg.m = m;
  cfg.max_iters = 30;
  cfg.seed = seed;
  SweepTable table = ua_sweep(family, ks, samples, cfg);

  Json params = {{"family", family_spec}, {"dim", dim},       {"ks", ks},
                 {"samples", samples},    {"restarts", restarts}, {"m", m}};
  Json payload = sweep_table_to_json(table);
  payload["config"] = approx_config_to_json(cfg);
  payload["description"] = family.description;
  const std::string csv = sweep_table_to_csv(table);
  payload["csv"] = csv;
  if (!csv_path.empty()) save_text(csv_path, csv);
  Json record = run_record("sweep", params, seed, payload, watch.seconds());
  std::cout << record.dump(2) << "\n";
  if (pretty) std::cerr << csv;
  return 0;
}

// --- check -----------------------------------------------------------------

Json report_to_json(const CheckReport& report) {
  Json results = Json::array();
  for (const auto& r : report.results) {
    results.push_back({{"name", r.name},
                       {"trials", r.trials},
                       {"failures", r.failures},
                       {"worst_slack", r.worst_slack},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
  }
  return Json{{"suite", report.suite}, {"results", results}, {"pass", report.all_pass()}};
}

int cmd_check(const std::string& suite, int trials, int dim, std::uint64_t seed, double tol,
              bool pretty) {
  Stopwatch watch;
  std::vector<CheckReport> reports;
  const auto want = [&](const char* name) { return suite == name || suite == "all"; };
  bool known = false;
  if (want("entropy-identities")) {
    known = true;
    reports.push_back(check_entropy_identities(trials, std::max(dim, 3), seed, tol));
  }
  if (want("lemma6")) {
    known = true;
    reports.push_back(check_lemma6(trials, std::max(1, trials / 2), seed, tol, 5e-3));
  }
  if (want("lemma11")) {
    known = true;
    reports.push_back(check_lemma11(std::max(1, trials / 10), seed));
  }
  if (want("glo")) {
    known = true;
    reports.push_back(check_glo(trials, std::min(std::max(dim, 2), 5), 5, seed, tol));
  }
  if (want("ensembles")) {
    known = true;
    reports.push_back(check_ensembles(trials, seed));
  }
  if (want("counterexamples")) {
    known = true;
    reports.push_back(check_counterexamples(std::max(1, trials / 4), seed));
  }
  if (!known)
    throw ValidationError(
        "unknown suite '" + suite +
        "'; expected entropy-identities | lemma6 | lemma11 | glo | ensembles | "
        "counterexamples | all");

  bool all_pass = true;
  Json payload = Json::array();
  for (const auto& report : reports) {
    payload.push_back(report_to_json(report));
    all_pass = all_pass && report.all_pass();
    if (pretty) {
      for (const auto& r : report.results)
        std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << report.suite << "/" << r.name
                  << "  trials=" << r.trials << "  worst_slack=" << r.worst_slack << "\n";
    }
  }
  Json params = {{"suite", suite}, {"trials", trials}, {"dim", dim}, {"tol", tol}};
  Json record =
      run_record("check", params, seed, Json{{"reports", payload}, {"pass", all_pass}},
                 watch.seconds());
  std::cout << record.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

// --- witness ---------------------------------------------------------------

int cmd_witness(const std::string& name, const std::string& blocks_text,
                const std::string& weights_text, bool pretty) {
  Stopwatch watch;
  Json payload;
  Json params = {{"name", name}};
  if (name == "remark3") {
    Remark3Report report = remark3_witness();
    payload = {{"H_rho", report.H_rho},
               {"H_rho1", report.H_rho1},
               {"H_rho2", report.H_rho2},
               {"ensemble_value", report.ensemble_value},
               {"delta_tilde_2", report.delta_tilde_2},
               {"delta_hat_2", report.delta_hat_2},
               {"strict_gap_confirmed", report.strict_gap_confirmed},
               {"ensemble", ensemble_to_json(report.ensemble)}};
    if (pretty)
      std::cerr << "H(rho)=" << report.H_rho << "  ensemble_value=" << report.ensemble_value
                << "  delta_hat_2=" << report.delta_hat_2
                << "  delta_tilde_2=" << report.delta_tilde_2 << "  strict_gap="
                << (report.strict_gap_confirmed ? "yes" : "no") << "\n";
  } else if (name == "remark4") {
    BlockSequenceSpec spec;
    for (int d : parse_int_list(blocks_text.empty() ? "3,4,5" : blocks_text, "--blocks"))
      spec.block_dims.push_back(d);
    if (weights_text.empty()) {
      spec.pi.assign(spec.block_dims.size(),
                     1.0 / static_cast<double>(spec.block_dims.size()));
    } else {
      spec.pi = parse_double_list(weights_text, "--weights");
    }
    const double closed = blockdiag_entropy_closed_form(spec);
    const double direct = blockdiag_entropy_direct(spec);
    Json lambdas = Json::array();
    Json sigma_entropies = Json::array();
    for (std::size_t i = 0; i < spec.block_dims.size(); ++i) {
      lambdas.push_back(spec.lambda(i));
      sigma_entropies.push_back(blockdiag_sigma_entropy(spec.block_dims[i]));
    }
    payload = {{"block_dims", spec.block_dims},
               {"weights", spec.pi},
               {"lambdas", lambdas},
               {"closed_form", closed},
               {"direct", direct},
               {"abs_difference", std::abs(closed - direct)},
               {"sigma_entropies", sigma_entropies}};
    params["blocks"] = blocks_text;
    params["weights"] = weights_text;
    if (pretty)
      std::cerr << "closed_form=" << closed << "  direct=" << direct
                << "  |difference|=" << std::abs(closed - direct) << "\n";
  } else {
    throw ValidationError("unknown witness '" + name + "'; expected remark3 | remark4");
  }
  Json record = run_record("witness", params, 0, payload, watch.seconds());
  std::cout << record.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entroscope: entropy approximation diagnostics on the positive cone"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  app.add_flag("--pretty", pretty, "also print a human-readable summary to stderr");

  // entropy
  auto* entropy_cmd = app.add_subcommand("entropy", "entropy functionals of one or two matrices");
  std::string matrix_path, second_path;
  entropy_cmd->add_option("matrix", matrix_path, "matrix JSON file")->required();
  entropy_cmd->add_option("second", second_path, "optional second matrix for H(A||B)");

  // approx
  auto* approx_cmd = app.add_subcommand("approx", "rank-constrained entropy approximator");
  std::string approx_path, seed_ensemble_path;
  int k = 1, m = 0, restarts = 16, max_iters = 200;
  std::uint64_t seed = 0;
  bool chain = false;
  approx_cmd->add_option("matrix", approx_path, "matrix JSON file")->required();
  approx_cmd->add_option("--k", k, "rank cap")->required();
  approx_cmd->add_option("--m", m, "block count (0 = dimension)");
  approx_cmd->add_option("--restarts", restarts, "random restarts");
  approx_cmd->add_option("--max-iters", max_iters, "sweep cap per start");
  approx_cmd->add_option("--seed", seed, "random seed");
  approx_cmd->add_flag("--chain", chain, "run k = 1..K, reusing best ensembles as seeds");
  approx_cmd->add_option("--seed-ensemble", seed_ensemble_path, "ensemble JSON file seed");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "uniform-approximation sweep over a family");
  std::string family_spec, ks_text = "1,2,4,8", csv_path;
  int dim = 6, samples = 50, sweep_restarts = 1, sweep_m = 0;
  std::uint64_t sweep_seed = 0;
  sweep_cmd->add_option("--family", family_spec, "family spec, e.g. energy_ball:linear:2.0")
      ->required();
  sweep_cmd->add_option("--dim", dim, "operator dimension");
  sweep_cmd->add_option("--ks", ks_text, "comma-separated rank caps");
  sweep_cmd->add_option("--samples", samples, "samples per k");
  sweep_cmd->add_option("--restarts", sweep_restarts, "optimizer restarts per sample");
  sweep_cmd->add_option("--m", sweep_m, "block count (0 = smallest holding the rank)");
  sweep_cmd->add_option("--seed", sweep_seed, "random seed");
  sweep_cmd->add_option("--csv", csv_path, "also write the CSV table to this path");

  // check
  auto* check_cmd = app.add_subcommand("check", "randomized invariant suites");
  std::string suite = "all";
  int trials = 100, check_dim = 6;
  std::uint64_t check_seed = 0;
  double tol = 1e-8;
  check_cmd->add_option("--suite", suite,
                        "entropy-identities | lemma6 | lemma11 | glo | ensembles | "
                        "counterexamples | all");
  check_cmd->add_option("--trials", trials, "trials per invariant");
  check_cmd->add_option("--dim", check_dim, "maximum dimension");
  check_cmd->add_option("--seed", check_seed, "random seed");
  check_cmd->add_option("--tol", tol, "slack tolerance for identities");

  // witness
  auto* witness_cmd = app.add_subcommand("witness", "explicit constructions as JSON reports");
  std::string witness_name, blocks_text, weights_text;
  witness_cmd->add_option("name", witness_name, "remark3 | remark4")->required();
  witness_cmd->add_option("--blocks", blocks_text, "block dimensions, e.g. 3,4,5");
  witness_cmd->add_option("--weights", weights_text, "mixing weights, e.g. 0.5,0.3,0.2");

  try {
    app.parse(argc, argv);
    if (entropy_cmd->parsed()) return cmd_entropy(matrix_path, second_path, pretty);
    if (approx_cmd->parsed())
      return cmd_approx(approx_path, k, m, restarts, max_iters, seed, chain,
                        seed_ensemble_path, pretty);
    if (sweep_cmd->parsed())
      return cmd_sweep(family_spec, dim, ks_text, samples, sweep_restarts, sweep_m, sweep_seed,
                       csv_path, pretty);
    if (check_cmd->parsed())
      return cmd_check(suite, trials, check_dim, check_seed, tol, pretty);
    if (witness_cmd->parsed())
      return cmd_witness(witness_name, blocks_text, weights_text, pretty);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const entroscope::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const entroscope::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
