// Copyright 2026 The sockopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// sockopt: single-binary CLI over the catalogue, simulation, experiment,
// estimation, and oracle modules. Every command that writes files emits a
// manifest.json with the resolved configuration, master seed, and content
// digests of inputs and outputs, so any output directory can be reproduced
// bit-exactly. Exit codes: 0 ok, 1 verification failure, 2 usage/config
// error, 3 data error, 4 guard refusal.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sockopt/catalogue.hpp"
#include "sockopt/config.hpp"
#include "sockopt/environment.hpp"
#include "sockopt/errors.hpp"
#include "sockopt/estimation.hpp"
#include "sockopt/experiments.hpp"
#include "sockopt/io.hpp"
#include "sockopt/manifest.hpp"
#include "sockopt/metrics.hpp"
#include "sockopt/oracle.hpp"
#include "sockopt/policies.hpp"
#include "sockopt/rng.hpp"

namespace {

using sockopt::ConfigError;
using sockopt::DataError;
using sockopt::GuardError;

namespace fs = std::filesystem;

// Named output files plus their manifest, written atomically into out_dir.
void write_output_set(const fs::path& out_dir, sockopt::RunManifest manifest,
                      std::vector<std::pair<std::string, std::string>> files) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec && !fs::is_directory(out_dir)) {
    throw DataError("cannot create output directory: " + out_dir.string());
  }
  for (const auto& [name, content] : files) {
    manifest.outputs.emplace_back(name, sockopt::fnv1a64_hex(content));
  }
  manifest.created_utc = sockopt::now_utc();
  files.emplace_back("manifest.json", sockopt::manifest_to_json(manifest));
  for (const auto& [name, content] : files) {
    sockopt::atomic_write_text(out_dir / name, content);
  }
}

int resolve_jobs(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("SOCKOPT_JOBS")) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || errno != 0 || v < 1 || v > 4096) {
      throw ConfigError(std::string("invalid SOCKOPT_JOBS value: ") + env);
    }
    return static_cast<int>(v);
  }
  return 1;
}

std::vector<double> parse_double_list(const std::string& flag,
                                      const std::string& text) {
  std::vector<double> out;
  for (const std::string& piece : sockopt::split_on(text, ',')) {
    const std::string item = sockopt::trim(piece);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || errno != 0 ||
        !std::isfinite(v)) {
      throw ConfigError(flag + ": invalid number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& flag,
                                const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(flag, text)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw ConfigError(flag + ": expected integers");
    }
    out.push_back(i);
  }
  return out;
}

// Effective per-command RNG root. A missing seed is a config error: all
// randomness must be pinned for the run to be reproducible.
std::uint64_t require_seed(const CLI::Option* seed_opt, std::uint64_t flag_val,
                           const sockopt::RunConfig* config) {
  if (seed_opt->count() > 0) return flag_val;
  if (config != nullptr && config->has_seed) return config->seed;
  throw ConfigError("--seed is required (or a `seed` key in the config)");
}

// Loads the catalogue named by the config, or synthesizes one from the
// catalogue spec under the master seed. File inputs are digested into the
// manifest.
sockopt::Catalogue resolve_catalogue(
    const sockopt::RunConfig& config, std::uint64_t seed,
    std::vector<std::pair<std::string, std::string>>* inputs) {
  if (!config.catalogue_path.empty()) {
    const std::string text = sockopt::read_text_file(config.catalogue_path);
    inputs->emplace_back(config.catalogue_path, sockopt::fnv1a64_hex(text));
    return sockopt::catalogue_from_csv(config.catalogue_path, text,
                                       config.catalogue_spec.feature_sizes,
                                       config.catalogue_spec.alpha);
  }
  return sockopt::generate_catalogue(config.catalogue_spec, seed);
}

// ---------------------------------------------------------------------------
// gen-catalogue

struct GenCatalogueArgs {
  int n = 1248;
  std::string features = "32,13,3";
  int price_min = 2;
  int price_max = 10;
  double alpha = 1.0;
  bool require_distinct = false;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int cmd_gen_catalogue(const GenCatalogueArgs& args) {
  sockopt::CatalogueSpec spec;
  spec.n_designs = args.n;
  spec.feature_sizes = parse_int_list("--features", args.features);
  spec.price_min = args.price_min;
  spec.price_max = args.price_max;
  spec.alpha = args.alpha;
  spec.distinct = args.require_distinct
                      ? sockopt::CatalogueSpec::Distinct::kRequire
                      : sockopt::CatalogueSpec::Distinct::kAuto;

  const sockopt::Catalogue catalogue = sockopt::generate_catalogue(
      spec, args.seed);

  sockopt::RunConfig snapshot = sockopt::default_run_config();
  snapshot.catalogue_spec = spec;
  snapshot.has_seed = true;
  snapshot.seed = args.seed;

  sockopt::RunManifest manifest;
  manifest.command = "gen-catalogue";
  manifest.config_text = sockopt::config_to_text(snapshot);
  manifest.seed = args.seed;
  write_output_set(args.out_dir, std::move(manifest),
                   {{"catalogue.csv", sockopt::catalogue_to_csv(catalogue)}});
  std::printf("wrote %zu designs to %s/catalogue.csv\n", catalogue.size(),
              args.out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string config_path;
  std::string policy;
  double tau_eta = 0.0;
  double tau_xi = 0.0;
  int reps = 60;
  std::uint64_t seed = 0;
  bool trace = false;
  int jobs = 0;
  std::string out_dir = ".";
  const CLI::Option* seed_opt = nullptr;
  const CLI::Option* policy_opt = nullptr;
  const CLI::Option* tau_eta_opt = nullptr;
  const CLI::Option* tau_xi_opt = nullptr;
};

int cmd_simulate(const SimulateArgs& args) {
  if (args.reps < 1) throw ConfigError("--reps must be >= 1");
  sockopt::RunConfig config = sockopt::load_config_file(args.config_path);
  if (args.policy_opt->count() > 0) {
    try {
      config.sim.policy.kind = sockopt::policy_from_name(args.policy);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--policy: ") + e.what());
    }
  }
  if (args.tau_eta_opt->count() > 0) config.sim.policy.tau_eta = args.tau_eta;
  if (args.tau_xi_opt->count() > 0) config.sim.policy.tau_xi = args.tau_xi;
  const std::uint64_t seed = require_seed(args.seed_opt, args.seed, &config);
  config.has_seed = true;
  config.seed = seed;
  config.sim.validate();
  const int jobs = resolve_jobs(args.jobs);

  std::vector<std::pair<std::string, std::string>> inputs;
  {
    const std::string text = sockopt::read_text_file(args.config_path);
    inputs.emplace_back(args.config_path, sockopt::fnv1a64_hex(text));
  }
  const sockopt::Catalogue catalogue =
      resolve_catalogue(config, seed, &inputs);

  const std::vector<sockopt::PolicySpec> policies = {config.sim.policy};
  const std::vector<sockopt::PolicyRunSet> sets = sockopt::experiment_reference(
      catalogue, config.sim, policies, args.reps, seed, jobs);

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("metrics.csv", sockopt::reference_to_csv(sets));
  files.emplace_back(
      "replications.csv",
      sockopt::replications_to_csv(sockopt::policy_name(config.sim.policy.kind),
                                   sets[0].runs));
  if (args.trace) {
    const sockopt::SimResult traced =
        sockopt::run_simulation(catalogue, config.sim, seed, 0, true);
    files.emplace_back("trace.csv", sockopt::trace_to_csv(traced.days));
  }

  sockopt::RunManifest manifest;
  manifest.command = "simulate";
  manifest.config_text = sockopt::config_to_text(config);
  manifest.seed = seed;
  manifest.inputs = std::move(inputs);
  write_output_set(args.out_dir, std::move(manifest), std::move(files));

  const sockopt::RunAggregate& agg = sets[0].agg;
  std::printf("%s: %d replications, mean socks %.2f, money %.2f, "
              "social %.4f, infeasible %.2f\n",
              sockopt::policy_name(config.sim.policy.kind).c_str(), args.reps,
              agg.socks_purchased.mean, agg.money.mean, agg.social.mean,
              agg.infeasible_days.mean);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string config_path;
  std::string d_values;
  std::string theta_values;
  int reps = 60;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out_dir = ".";
  const CLI::Option* seed_opt = nullptr;
  const CLI::Option* d_opt = nullptr;
  const CLI::Option* theta_opt = nullptr;
};

int cmd_sweep(const SweepArgs& args) {
  sockopt::RunConfig config = sockopt::load_config_file(args.config_path);
  const std::uint64_t seed = require_seed(args.seed_opt, args.seed, &config);
  config.has_seed = true;
  config.seed = seed;
  config.sim.validate();
  const int jobs = resolve_jobs(args.jobs);

  sockopt::GridSpec grid;
  if (args.d_opt->count() > 0) {
    grid.d_values = parse_double_list("--d-values", args.d_values);
  }
  if (args.theta_opt->count() > 0) {
    grid.theta_values = parse_int_list("--theta-values", args.theta_values);
  }
  grid.replications = args.reps;
  grid.validate();

  std::vector<std::pair<std::string, std::string>> inputs;
  {
    const std::string text = sockopt::read_text_file(args.config_path);
    inputs.emplace_back(args.config_path, sockopt::fnv1a64_hex(text));
  }
  const sockopt::Catalogue catalogue =
      resolve_catalogue(config, seed, &inputs);

  const std::vector<sockopt::PolicySpec> policies =
      sockopt::default_grid_policies();
  const std::vector<sockopt::GridCell> cells = sockopt::experiment_grid(
      catalogue, config.sim, grid, policies, seed, jobs);

  sockopt::RunManifest manifest;
  manifest.command = "sweep";
  manifest.config_text = sockopt::config_to_text(config);
  manifest.seed = seed;
  manifest.inputs = std::move(inputs);
  write_output_set(args.out_dir, std::move(manifest),
                   {{"grid.csv", sockopt::grid_to_csv(cells)},
                    {"series.csv", sockopt::grid_series_to_csv(cells)}});
  std::printf("sweep: %zu cells (%zu theta x %zu d x %zu policies)\n",
              cells.size(), grid.theta_values.size(), grid.d_values.size(),
              policies.size());
  return 0;
}

// ---------------------------------------------------------------------------
// tradeoff

struct TradeoffArgs {
  std::string config_path;
  std::string taus;
  int reps = 60;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out_dir = ".";
  const CLI::Option* seed_opt = nullptr;
  const CLI::Option* taus_opt = nullptr;
};

int cmd_tradeoff(const TradeoffArgs& args) {
  if (args.reps < 2) throw ConfigError("--reps must be >= 2");
  sockopt::RunConfig config = sockopt::load_config_file(args.config_path);
  const std::uint64_t seed = require_seed(args.seed_opt, args.seed, &config);
  config.has_seed = true;
  config.seed = seed;
  config.sim.validate();
  const int jobs = resolve_jobs(args.jobs);

  std::vector<double> taus = sockopt::default_tau_xi_grid();
  if (args.taus_opt->count() > 0) {
    taus = parse_double_list("--taus", args.taus);
    if (taus.empty()) throw ConfigError("--taus: empty grid");
  }

  std::vector<std::pair<std::string, std::string>> inputs;
  {
    const std::string text = sockopt::read_text_file(args.config_path);
    inputs.emplace_back(args.config_path, sockopt::fnv1a64_hex(text));
  }
  const sockopt::Catalogue catalogue =
      resolve_catalogue(config, seed, &inputs);

  const sockopt::TradeOffResult result = sockopt::experiment_tradeoff(
      catalogue, config.sim, taus, args.reps, seed, jobs);

  sockopt::RunManifest manifest;
  manifest.command = "tradeoff";
  manifest.config_text = sockopt::config_to_text(config);
  manifest.seed = seed;
  manifest.inputs = std::move(inputs);
  write_output_set(
      args.out_dir, std::move(manifest),
      {{"tradeoff.csv", sockopt::tradeoff_to_csv(result.points)},
       {"annotations.json", sockopt::tradeoff_annotations_json(result)}});
  std::printf("tradeoff: %zu points over %zu tolerance values\n",
              result.points.size(), taus.size());
  return 0;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateFileArgs {
  std::string in_path;
  double ridge = 1e-3;
  std::string out_dir = ".";
};

std::string single_results_csv(const std::string& param,
                               const std::vector<std::string>& ids,
                               const std::vector<sockopt::EstimationResult>& r) {
  std::string out = "respondent_id," + param + "_hat," + param +
                    "_se,log_lik,converged,identified\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i];
    out += ',';
    out += sockopt::fmt_full(r[i].estimate);
    out += ',';
    out += sockopt::fmt_full(r[i].se);
    out += ',';
    out += sockopt::fmt_full(r[i].log_lik);
    out += ',';
    out += r[i].converged ? "1" : "0";
    out += ',';
    out += r[i].identified ? "1" : "0";
    out += '\n';
  }
  return out;
}

int cmd_estimate_chi(const EstimateFileArgs& args) {
  const std::string text = sockopt::read_text_file(args.in_path);
  const sockopt::TrialsFile data =
      sockopt::trials_from_csv(args.in_path, text);
  std::vector<sockopt::EstimationResult> results(data.ids.size());
  for (std::size_t i = 0; i < data.ids.size(); ++i) {
    results[i] = sockopt::fit_chi(data.trials[i], args.ridge);
  }
  sockopt::RunManifest manifest;
  manifest.command = "estimate chi";
  manifest.inputs.emplace_back(args.in_path, sockopt::fnv1a64_hex(text));
  write_output_set(
      args.out_dir, std::move(manifest),
      {{"chi_results.csv", single_results_csv("chi", data.ids, results)}});
  std::printf("fit chi for %zu respondents\n", data.ids.size());
  return 0;
}

int cmd_estimate_delta(const EstimateFileArgs& args) {
  const std::string text = sockopt::read_text_file(args.in_path);
  const sockopt::BundlesFile data =
      sockopt::bundles_from_csv(args.in_path, text);
  std::vector<sockopt::EstimationResult> results(data.ids.size());
  for (std::size_t i = 0; i < data.ids.size(); ++i) {
    results[i] = sockopt::fit_delta(data.sets[i], args.ridge);
  }
  sockopt::RunManifest manifest;
  manifest.command = "estimate delta";
  manifest.inputs.emplace_back(args.in_path, sockopt::fnv1a64_hex(text));
  write_output_set(
      args.out_dir, std::move(manifest),
      {{"delta_results.csv", single_results_csv("delta", data.ids, results)}});
  std::printf("fit delta for %zu respondents\n", data.ids.size());
  return 0;
}

struct SynthArgs {
  int n = 60;
  int trials = 500;
  int sets = 200;
  int bundles = 4;
  // Defaults reproduce right-skewed populations whose mean/median match the
  // reference study statistics (chi 1.120/0.968, delta 1.753/1.368).
  double chi_mu = -0.032523191705560036;
  double chi_sigma = 0.54009605999778078;
  double chi_max = 3.4;
  double delta_mu = 0.31334981920035872;
  double delta_sigma = 0.70424255301527858;
  double delta_max = 8.3;
  double ridge = 1e-3;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out_dir = ".";
};

int cmd_estimate_synth(const SynthArgs& args) {
  if (args.n < 1) throw ConfigError("--n must be >= 1");
  const int jobs = resolve_jobs(args.jobs);
  sockopt::LognormalDist chi_dist{args.chi_mu, args.chi_sigma, args.chi_max};
  sockopt::LognormalDist delta_dist{args.delta_mu, args.delta_sigma,
                                    args.delta_max};
  sockopt::SynthDesign design;
  design.n_trials = args.trials;
  design.n_sets = args.sets;
  design.bundles_per_set = args.bundles;

  const std::vector<sockopt::RespondentData> respondents =
      sockopt::synthesize_respondents(chi_dist, delta_dist, args.n, design,
                                      args.seed);

  std::vector<sockopt::EstimationResult> chi_fits(respondents.size());
  std::vector<sockopt::EstimationResult> delta_fits(respondents.size());
  sockopt::parallel_for(
      static_cast<int>(respondents.size()), jobs, [&](int i) {
        chi_fits[i] = sockopt::fit_chi(respondents[i].trials, args.ridge);
        delta_fits[i] = sockopt::fit_delta(respondents[i].sets, args.ridge);
      });

  std::vector<std::string> ids;
  std::vector<double> chi_hat, delta_hat, compliance;
  double chi_mae = 0.0;
  double delta_mae = 0.0;
  for (std::size_t i = 0; i < respondents.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "r%04zu", i);
    ids.emplace_back(buf);
    chi_hat.push_back(chi_fits[i].estimate);
    delta_hat.push_back(delta_fits[i].estimate);
    compliance.push_back(respondents[i].compliance);
    chi_mae += std::fabs(chi_fits[i].estimate - respondents[i].chi_true);
    delta_mae += std::fabs(delta_fits[i].estimate - respondents[i].delta_true);
  }
  chi_mae /= static_cast<double>(respondents.size());
  delta_mae /= static_cast<double>(respondents.size());

  const sockopt::EstimationSummary summary =
      sockopt::summary_statistics(chi_hat, delta_hat, compliance);

  std::string truth_csv = "respondent_id,chi_true,delta_true,compliance\n";
  for (std::size_t i = 0; i < respondents.size(); ++i) {
    truth_csv += ids[i];
    truth_csv += ',';
    truth_csv += sockopt::fmt_full(respondents[i].chi_true);
    truth_csv += ',';
    truth_csv += sockopt::fmt_full(respondents[i].delta_true);
    truth_csv += ',';
    truth_csv += sockopt::fmt_full(respondents[i].compliance);
    truth_csv += '\n';
  }

  nlohmann::json j;
  j["n"] = args.n;
  j["chi_mean"] = summary.chi_mean;
  j["chi_median"] = summary.chi_median;
  j["delta_mean"] = summary.delta_mean;
  j["delta_median"] = summary.delta_median;
  j["corr_chi_compliance"] = summary.corr_chi_compliance;
  j["corr_delta_compliance"] = summary.corr_delta_compliance;
  j["corr_chi_delta"] = summary.corr_chi_delta;
  j["chi_mae"] = chi_mae;
  j["delta_mae"] = delta_mae;

  sockopt::RunManifest manifest;
  manifest.command = "estimate synth";
  manifest.seed = args.seed;
  write_output_set(
      args.out_dir, std::move(manifest),
      {{"trials.csv", sockopt::trials_to_csv(respondents)},
       {"bundles.csv", sockopt::bundles_to_csv(respondents)},
       {"results.csv", sockopt::results_to_csv(ids, chi_fits, delta_fits)},
       {"truth.csv", std::move(truth_csv)},
       {"summary.json", j.dump(2) + "\n"}});
  std::printf("synth: n=%d chi mean %.3f median %.3f mae %.3f | "
              "delta mean %.3f median %.3f mae %.3f\n",
              args.n, summary.chi_mean, summary.chi_median, chi_mae,
              summary.delta_mean, summary.delta_median, delta_mae);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleVerifyArgs {
  bool random = false;
  int n = 6;
  int trials = 50;
  long long max_wv = 9;
  std::uint64_t seed = 0;
};

int cmd_oracle_verify(const OracleVerifyArgs& args) {
  if (!args.random) {
    throw ConfigError("oracle verify requires --random");
  }
  if (args.trials < 1) throw ConfigError("--trials must be >= 1");
  int equivalent = 0;
  std::string first_failure;
  for (int t = 0; t < args.trials; ++t) {
    sockopt::RngStream rng(args.seed, static_cast<std::uint64_t>(t), "oracle");
    const sockopt::KnapsackInstance k =
        sockopt::random_knapsack(rng, args.n, args.max_wv);
    if (sockopt::verify_reduction(k)) {
      ++equivalent;
    } else if (first_failure.empty()) {
      first_failure = sockopt::knapsack_to_json(k);
    }
  }
  std::printf("%d/%d equivalent\n", equivalent, args.trials);
  if (equivalent != args.trials) {
    std::fprintf(stderr, "first failing instance: %s\n",
                 first_failure.c_str());
    return 1;
  }
  return 0;
}

struct OracleSolveArgs {
  std::string in_path;
  std::string out_dir;
  const CLI::Option* out_opt = nullptr;
};

int cmd_oracle_solve(const OracleSolveArgs& args) {
  const std::string text = sockopt::read_text_file(args.in_path);
  nlohmann::json solution;
  std::string printed;
  bool is_knapsack = false;
  try {
    const nlohmann::json probe = nlohmann::json::parse(text);
    is_knapsack = probe.is_object() && probe.contains("weights");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(args.in_path + ": " + e.what());
  }

  if (is_knapsack) {
    const sockopt::KnapsackInstance k = sockopt::knapsack_from_json(text);
    const long long best = sockopt::solve_knapsack_exact(k);
    solution["kind"] = "knapsack";
    solution["optimum"] = best;
    solution["target"] = k.target;
    solution["target_reachable"] = best >= k.target;
    char line[128];
    std::snprintf(line, sizeof(line),
                  "knapsack optimum %lld (target %lld: %s)\n", best, k.target,
                  best >= k.target ? "reachable" : "unreachable");
    printed = line;
  } else {
    const sockopt::SockPlanInstance inst = sockopt::sockplan_from_json(text);
    const sockopt::SockPlanResult result = sockopt::brute_force_sockplan(inst);
    solution["kind"] = "sockplan";
    solution["best"] = {result.best.num, result.best.den};
    solution["best_value"] = result.best.to_double();
    solution["purchased"] = result.purchased;
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& members : result.classes) classes.push_back(members);
    solution["classes"] = std::move(classes);
    nlohmann::json schedule = nlohmann::json::array();
    for (const sockopt::OracleDay& day : result.schedule) {
      nlohmann::json d;
      d["wear"] = day.wear;
      if (day.wear) {
        d["class_a"] = day.class_a;
        d["class_b"] = day.class_b;
        d["gain"] = {day.gain.num, day.gain.den};
      }
      schedule.push_back(std::move(d));
    }
    solution["schedule"] = std::move(schedule);
    if (inst.k_defined) {
      solution["threshold_k"] = {inst.threshold_k.num, inst.threshold_k.den};
      solution["meets_threshold"] = inst.threshold_k <= result.best;
    }
    char line[128];
    std::snprintf(line, sizeof(line), "sockplan optimum %s (%.6f)\n",
                  result.best.str().c_str(), result.best.to_double());
    printed = line;
  }

  std::fputs(printed.c_str(), stdout);
  if (args.out_opt->count() > 0) {
    sockopt::RunManifest manifest;
    manifest.command = "oracle solve";
    manifest.inputs.emplace_back(args.in_path, sockopt::fnv1a64_hex(text));
    write_output_set(args.out_dir, std::move(manifest),
                     {{"solution.json", solution.dump(2) + "\n"}});
  }
  return 0;
}

struct OracleCoverageArgs {
  bool random = false;
  int sets = 10;
  int elems = 12;
  int trials = 100;
  std::uint64_t seed = 0;
};

int cmd_oracle_coverage(const OracleCoverageArgs& args) {
  if (!args.random) {
    throw ConfigError("oracle coverage requires --random");
  }
  if (args.trials < 1) throw ConfigError("--trials must be >= 1");
  // Greedy must reach the (1 - 1/e) share of the brute-force optimum.
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  int ok = 0;
  double worst_ratio = 2.0;
  for (int t = 0; t < args.trials; ++t) {
    sockopt::RngStream rng(args.seed, static_cast<std::uint64_t>(t), "oracle");
    const sockopt::CoverageInstance inst =
        sockopt::random_coverage(rng, args.sets, args.elems);
    const double greedy = sockopt::sock_design_greedy(inst).value;
    const double opt = sockopt::coverage_brute_force(inst).value;
    const double ratio = opt > 0.0 ? greedy / opt : 1.0;
    if (ratio < worst_ratio) worst_ratio = ratio;
    if (greedy + 1e-9 >= bound * opt) ++ok;
  }
  std::printf("%d/%d within ratio bound (worst %.4f, bound %.4f)\n", ok,
              args.trials, worst_ratio, bound);
  return ok == args.trials ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sock ownership simulation and estimation toolkit"};
  app.require_subcommand(1);

  GenCatalogueArgs gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-catalogue", "Sample a synthetic design catalogue");
  gen_cmd->add_option("--n", gen.n, "Number of designs")
      ->capture_default_str();
  gen_cmd->add_option("--features", gen.features,
                      "Comma-separated feature cardinalities")
      ->capture_default_str();
  gen_cmd->add_option("--price-min", gen.price_min, "Minimum price")
      ->capture_default_str();
  gen_cmd->add_option("--price-max", gen.price_max, "Maximum price")
      ->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "Eco footprint per price unit")
      ->capture_default_str();
  gen_cmd->add_flag("--require-distinct", gen.require_distinct,
                    "Fail instead of sampling with replacement");
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->required();
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")
      ->capture_default_str();

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Run replications of one policy under a config");
  sim_cmd->add_option("--config", sim.config_path, "Config file")->required();
  sim.policy_opt = sim_cmd->add_option("--policy", sim.policy,
                                       "Override the config's policy");
  sim.tau_eta_opt = sim_cmd->add_option("--tau-eta", sim.tau_eta,
                                        "Override the purist tolerance");
  sim.tau_xi_opt = sim_cmd->add_option("--tau-xi", sim.tau_xi,
                                       "Override the mixing threshold");
  sim_cmd->add_option("--reps", sim.reps, "Replication count")
      ->capture_default_str();
  sim.seed_opt = sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_flag("--trace", sim.trace,
                    "Also write a per-day trace of replication 0");
  sim_cmd->add_option("--jobs", sim.jobs, "Worker threads");
  sim_cmd->add_option("--out", sim.out_dir, "Output directory")
      ->capture_default_str();

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Stress grid over wear capacity and wash loss");
  sweep_cmd->add_option("--config", sweep.config_path, "Config file")
      ->required();
  sweep.d_opt = sweep_cmd->add_option("--d-values", sweep.d_values,
                                      "Comma-separated loss probabilities");
  sweep.theta_opt = sweep_cmd->add_option(
      "--theta-values", sweep.theta_values, "Comma-separated wear capacities");
  sweep_cmd->add_option("--reps", sweep.reps, "Replications per cell")
      ->capture_default_str();
  sweep.seed_opt = sweep_cmd->add_option("--seed", sweep.seed, "Master seed");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")
      ->capture_default_str();

  TradeoffArgs tradeoff;
  CLI::App* tradeoff_cmd = app.add_subcommand(
      "tradeoff", "Tolerance sweep against the strict-matching baseline");
  tradeoff_cmd->add_option("--config", tradeoff.config_path, "Config file")
      ->required();
  tradeoff.taus_opt = tradeoff_cmd->add_option(
      "--taus", tradeoff.taus, "Comma-separated compatibility thresholds");
  tradeoff_cmd->add_option("--reps", tradeoff.reps, "Replication count")
      ->capture_default_str();
  tradeoff.seed_opt =
      tradeoff_cmd->add_option("--seed", tradeoff.seed, "Master seed");
  tradeoff_cmd->add_option("--jobs", tradeoff.jobs, "Worker threads");
  tradeoff_cmd->add_option("--out", tradeoff.out_dir, "Output directory")
      ->capture_default_str();

  CLI::App* est_cmd = app.add_subcommand(
      "estimate", "Preference estimation from choice data");
  est_cmd->require_subcommand(1);

  EstimateFileArgs est_chi;
  CLI::App* chi_cmd = est_cmd->add_subcommand(
      "chi", "Fit mismatch sensitivity from pairwise trials");
  chi_cmd->add_option("--in", est_chi.in_path, "Trials CSV")->required();
  chi_cmd->add_option("--ridge", est_chi.ridge, "Ridge weight")
      ->capture_default_str();
  chi_cmd->add_option("--out", est_chi.out_dir, "Output directory")
      ->capture_default_str();

  EstimateFileArgs est_delta;
  CLI::App* delta_cmd = est_cmd->add_subcommand(
      "delta", "Fit diversity preference from bundle choices");
  delta_cmd->add_option("--in", est_delta.in_path, "Bundles CSV")->required();
  delta_cmd->add_option("--ridge", est_delta.ridge, "Ridge weight")
      ->capture_default_str();
  delta_cmd->add_option("--out", est_delta.out_dir, "Output directory")
      ->capture_default_str();

  SynthArgs synth;
  CLI::App* synth_cmd = est_cmd->add_subcommand(
      "synth", "Synthesize respondents and validate recovery");
  synth_cmd->add_option("--n", synth.n, "Respondent count")
      ->capture_default_str();
  synth_cmd->add_option("--trials", synth.trials, "Pairwise trials each")
      ->capture_default_str();
  synth_cmd->add_option("--sets", synth.sets, "Bundle choice sets each")
      ->capture_default_str();
  synth_cmd->add_option("--bundles", synth.bundles, "Bundles per set")
      ->capture_default_str();
  synth_cmd->add_option("--chi-mu", synth.chi_mu, "Chi lognormal mu")
      ->capture_default_str();
  synth_cmd->add_option("--chi-sigma", synth.chi_sigma, "Chi lognormal sigma")
      ->capture_default_str();
  synth_cmd->add_option("--chi-max", synth.chi_max, "Chi truncation")
      ->capture_default_str();
  synth_cmd->add_option("--delta-mu", synth.delta_mu, "Delta lognormal mu")
      ->capture_default_str();
  synth_cmd->add_option("--delta-sigma", synth.delta_sigma,
                        "Delta lognormal sigma")
      ->capture_default_str();
  synth_cmd->add_option("--delta-max", synth.delta_max, "Delta truncation")
      ->capture_default_str();
  synth_cmd->add_option("--ridge", synth.ridge, "Ridge weight")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Master seed")->required();
  synth_cmd->add_option("--jobs", synth.jobs, "Worker threads");
  synth_cmd->add_option("--out", synth.out_dir, "Output directory")
      ->capture_default_str();

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Exact solvers and equivalence checks on tiny instances");
  oracle_cmd->require_subcommand(1);

  OracleVerifyArgs verify;
  CLI::App* verify_cmd = oracle_cmd->add_subcommand(
      "verify", "Check the planning/knapsack equivalence on random instances");
  verify_cmd->add_flag("--random", verify.random, "Sample random instances");
  verify_cmd->add_option("--n", verify.n, "Max items per instance")
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify.trials, "Instance count")
      ->capture_default_str();
  verify_cmd->add_option("--max-wv", verify.max_wv,
                         "Max item weight and value")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Master seed")->required();

  OracleSolveArgs solve;
  CLI::App* solve_cmd = oracle_cmd->add_subcommand(
      "solve", "Solve one instance file (knapsack or planning JSON)");
  solve_cmd->add_option("--in", solve.in_path, "Instance JSON")->required();
  solve.out_opt =
      solve_cmd->add_option("--out", solve.out_dir, "Output directory");

  OracleCoverageArgs coverage;
  CLI::App* coverage_cmd = oracle_cmd->add_subcommand(
      "coverage", "Check the greedy coverage ratio on random instances");
  coverage_cmd->add_flag("--random", coverage.random,
                         "Sample random instances");
  coverage_cmd->add_option("--sets", coverage.sets, "Max candidate sets")
      ->capture_default_str();
  coverage_cmd->add_option("--elems", coverage.elems, "Max universe size")
      ->capture_default_str();
  coverage_cmd->add_option("--trials", coverage.trials, "Instance count")
      ->capture_default_str();
  coverage_cmd->add_option("--seed", coverage.seed, "Master seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_catalogue(gen);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    if (tradeoff_cmd->parsed()) return cmd_tradeoff(tradeoff);
    if (est_cmd->parsed()) {
      if (chi_cmd->parsed()) return cmd_estimate_chi(est_chi);
      if (delta_cmd->parsed()) return cmd_estimate_delta(est_delta);
      if (synth_cmd->parsed()) return cmd_estimate_synth(synth);
    }
    if (oracle_cmd->parsed()) {
      if (verify_cmd->parsed()) return cmd_oracle_verify(verify);
      if (solve_cmd->parsed()) return cmd_oracle_solve(solve);
      if (coverage_cmd->parsed()) return cmd_oracle_coverage(coverage);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const GuardError& e) {
    std::fprintf(stderr, "guard refusal: %s\n", e.what());
    return 4;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "error: no subcommand\n");
  return 2;
}
