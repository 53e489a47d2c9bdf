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

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "sockopt/config.hpp"
#include "sockopt/environment.hpp"
#include "sockopt/errors.hpp"
#include "sockopt/io.hpp"
#include "sockopt/manifest.hpp"
#include "sockopt/policies.hpp"

namespace {

using sockopt::ConfigError;
using sockopt::DataError;
using sockopt::DiversityMetric;
using sockopt::PolicyKind;
using sockopt::RunConfig;
using sockopt::RunManifest;

// Scoped SOURCE_DATE_EPOCH override; restores the previous value on exit.
class EpochGuard {
 public:
  explicit EpochGuard(const char* value) {
    const char* old = std::getenv("SOURCE_DATE_EPOCH");
    if (old != nullptr) {
      had_old_ = true;
      old_ = old;
    }
    setenv("SOURCE_DATE_EPOCH", value, 1);
  }
  ~EpochGuard() {
    if (had_old_) {
      setenv("SOURCE_DATE_EPOCH", old_.c_str(), 1);
    } else {
      unsetenv("SOURCE_DATE_EPOCH");
    }
  }

 private:
  bool had_old_ = false;
  std::string old_;
};

TEST_CASE("defaults describe the reference setup") {
  const RunConfig c = sockopt::default_run_config();
  CHECK(c.sim.T == 365);
  CHECK(c.sim.kappa == 14);
  CHECK(c.sim.theta == 50);
  CHECK(c.sim.d == 0.02);
  CHECK(c.sim.agent.budget == 200.0);
  CHECK(c.sim.agent.chi == 1.25);
  CHECK(c.sim.agent.delta == 0.5);
  CHECK(c.sim.agent.rho == 0.5);
  CHECK(c.sim.agent.gamma == 1.02);
  CHECK(c.sim.agent.lambda == 0.0);
  CHECK(c.sim.policy.kind == PolicyKind::kGreedy);
  CHECK(c.sim.policy.tau_eta == 0.0);
  CHECK(c.sim.policy.tau_xi == 0.7);
  CHECK(c.sim.replenishment);
  CHECK(c.sim.diversity_metric == DiversityMetric::kEntropy);
  CHECK(c.sim.diversity_at_start);
  CHECK_FALSE(c.sim.diversity_at_end);
  CHECK(c.catalogue_spec.n_designs == 1248);
  CHECK(c.catalogue_spec.feature_sizes == std::vector<int>{32, 13, 3});
  CHECK(c.catalogue_spec.price_min == 2);
  CHECK(c.catalogue_spec.price_max == 10);
  CHECK(c.catalogue_spec.alpha == 1.0);
  CHECK(c.catalogue_path.empty());
  CHECK_FALSE(c.has_seed);
}

TEST_CASE("a full configuration parses field by field") {
  const std::string text =
      "# run setup\n"
      "T = 120\n"
      "kappa = 7\n"
      "b = 150.5\n"
      "theta = 30\n"
      "d = 0.04   # wash loss\n"
      "rho = 0.25\n"
      "chi = 2.5\n"
      "gamma = 1.5\n"
      "alpha = 0.8\n"
      "delta = 0.9\n"
      "lambda = 0.1\n"
      "policy = orphan_rescue\n"
      "tau_eta = 0.05\n"
      "tau_xi = 0.65\n"
      "replenishment = off\n"
      "seed = 99\n"
      "catalogue = data/catalogue.csv\n"
      "n_designs = 64\n"
      "feature_sizes = 8, 4, 2\n"
      "price_min = 3\n"
      "price_max = 12\n"
      "diversity_metric = dispersion\n"
      "diversity_times = 0,T\n";
  const RunConfig c = sockopt::parse_config_text("run.conf", text);
  CHECK(c.sim.T == 120);
  CHECK(c.sim.kappa == 7);
  CHECK(c.sim.agent.budget == 150.5);
  CHECK(c.sim.theta == 30);
  CHECK(c.sim.d == 0.04);
  CHECK(c.sim.agent.rho == 0.25);
  CHECK(c.sim.agent.chi == 2.5);
  CHECK(c.sim.agent.gamma == 1.5);
  CHECK(c.catalogue_spec.alpha == 0.8);
  CHECK(c.sim.agent.delta == 0.9);
  CHECK(c.sim.agent.lambda == 0.1);
  CHECK(c.sim.policy.kind == PolicyKind::kOrphanRescue);
  CHECK(c.sim.policy.tau_eta == 0.05);
  CHECK(c.sim.policy.tau_xi == 0.65);
  CHECK_FALSE(c.sim.replenishment);
  CHECK(c.has_seed);
  CHECK(c.seed == 99);
  CHECK(c.catalogue_path == "data/catalogue.csv");
  CHECK(c.catalogue_spec.n_designs == 64);
  CHECK(c.catalogue_spec.feature_sizes == std::vector<int>{8, 4, 2});
  CHECK(c.catalogue_spec.price_min == 3);
  CHECK(c.catalogue_spec.price_max == 12);
  CHECK(c.sim.diversity_metric == DiversityMetric::kDispersion);
  CHECK(c.sim.diversity_at_start);
  CHECK(c.sim.diversity_at_end);
}

TEST_CASE("parse errors name the file and line") {
  const auto fails_with = [](const std::string& text,
                             const std::string& needle) {
    try {
      sockopt::parse_config_text("bad.conf", text);
      FAIL_CHECK("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      CHECK(msg.find(needle) != std::string::npos);
    }
  };
  fails_with("T = 10\nbogus = 3\n", "bad.conf:2");
  fails_with("bogus = 3\n", "unknown key 'bogus'");
  fails_with("T = 10\nT = 20\n", "duplicate key 'T'");
  fails_with("just some text\n", "expected key = value");
  fails_with("T =\n", "empty value");
  fails_with(" = 10\n", "empty key");
  fails_with("T = ten\n", "expected an integer");
  fails_with("d = fast\n", "expected a number");
  fails_with("replenishment = maybe\n", "expected true/false");
  fails_with("seed = -4\n", "nonnegative");
  fails_with("diversity_metric = variety\n", "entropy or dispersion");
  fails_with("diversity_times = 0,7\n", "must be 0, T, or none");
  CHECK_THROWS_AS(sockopt::parse_config_text("bad.conf", "policy = fancy\n"),
                  ConfigError);
}

TEST_CASE("boolean and diversity-time spellings normalize") {
  auto parse_one = [](const std::string& line) {
    return sockopt::parse_config_text("c.conf", line);
  };
  CHECK(parse_one("replenishment = 1\n").sim.replenishment);
  CHECK(parse_one("replenishment = on\n").sim.replenishment);
  CHECK_FALSE(parse_one("replenishment = 0\n").sim.replenishment);
  CHECK_FALSE(parse_one("replenishment = false\n").sim.replenishment);

  RunConfig c = parse_one("diversity_times = none\n");
  CHECK_FALSE(c.sim.diversity_at_start);
  CHECK_FALSE(c.sim.diversity_at_end);
  c = parse_one("diversity_times = T\n");
  CHECK_FALSE(c.sim.diversity_at_start);
  CHECK(c.sim.diversity_at_end);
  c = parse_one("diversity_times = 0\n");
  CHECK(c.sim.diversity_at_start);
  CHECK_FALSE(c.sim.diversity_at_end);
}

TEST_CASE("snapshots round-trip losslessly") {
  SUBCASE("defaults") {
    const RunConfig c = sockopt::default_run_config();
    const std::string text = sockopt::config_to_text(c);
    const RunConfig back = sockopt::parse_config_text("snap.conf", text);
    CHECK(sockopt::config_to_text(back) == text);
  }
  SUBCASE("customized run") {
    RunConfig c = sockopt::default_run_config();
    c.sim.T = 30;
    c.sim.d = 0.125;
    c.sim.agent.chi = 1.0 / 3.0;  // needs full-precision formatting
    c.sim.policy.kind = PolicyKind::kExposureAware;
    c.sim.diversity_at_end = true;
    c.sim.diversity_metric = DiversityMetric::kDispersion;
    c.catalogue_path = "cat.csv";
    c.has_seed = true;
    c.seed = 1234567890123456789ULL;
    const std::string text = sockopt::config_to_text(c);
    const RunConfig back = sockopt::parse_config_text("snap.conf", text);
    CHECK(back.sim.agent.chi == c.sim.agent.chi);
    CHECK(back.seed == c.seed);
    CHECK(back.catalogue_path == c.catalogue_path);
    CHECK(sockopt::config_to_text(back) == text);
  }
  SUBCASE("no diversity at all") {
    RunConfig c = sockopt::default_run_config();
    c.sim.diversity_at_start = false;
    const std::string text = sockopt::config_to_text(c);
    CHECK(text.find("diversity_times = none\n") != std::string::npos);
    CHECK(sockopt::config_to_text(
              sockopt::parse_config_text("snap.conf", text)) == text);
  }
}

TEST_CASE("config files load from disk") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "sockopt_cfg_test.conf";
  sockopt::atomic_write_text(path, "T = 45\nseed = 7\n");
  const RunConfig c = sockopt::load_config_file(path.string());
  CHECK(c.sim.T == 45);
  CHECK(c.has_seed);
  fs::remove(path);
  CHECK_THROWS_AS(
      sockopt::load_config_file("/nonexistent/sockopt_missing.conf"),
      DataError);
}

TEST_CASE("timestamps honor a pinned epoch") {
  {
    EpochGuard guard("0");
    CHECK(sockopt::now_utc() == "1970-01-01T00:00:00Z");
  }
  {
    EpochGuard guard("86400");
    CHECK(sockopt::now_utc() == "1970-01-02T00:00:00Z");
  }
  {
    EpochGuard guard("1755129600");
    CHECK(sockopt::now_utc() == "2025-08-14T00:00:00Z");
  }
  {
    // Unparseable pins fall back to the live clock but keep the format.
    EpochGuard guard("not-a-number");
    const std::string ts = sockopt::now_utc();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
  }
}

TEST_CASE("manifests round-trip through JSON") {
  RunManifest m;
  m.command = "simulate --config run.conf";
  m.config_text = "T = 10\nseed = 3\n";
  m.seed = 3;
  m.inputs = {{"a/run.conf", "deadbeef01234567"}};
  m.outputs = {{"metrics.csv", "0123456789abcdef"},
               {"trace.csv", "fedcba9876543210"}};
  m.created_utc = "2026-08-14T00:00:00Z";
  const std::string text = sockopt::manifest_to_json(m);
  CHECK(text == sockopt::manifest_to_json(m));  // deterministic
  CHECK(text.back() == '\n');

  const RunManifest back = sockopt::manifest_from_json(text);
  CHECK(back.command == m.command);
  CHECK(back.config_text == m.config_text);
  CHECK(back.seed == m.seed);
  CHECK(back.version == sockopt::kArtifactVersion);
  CHECK(back.inputs == m.inputs);
  CHECK(back.outputs == m.outputs);
  CHECK(back.created_utc == m.created_utc);

  CHECK_THROWS_AS(sockopt::manifest_from_json("{"), DataError);
  CHECK_THROWS_AS(sockopt::manifest_from_json("{\"command\": \"x\"}"),
                  DataError);
}

}  // namespace
