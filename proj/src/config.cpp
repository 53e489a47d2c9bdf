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

#include "sockopt/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <set>
#include <vector>

#include "sockopt/errors.hpp"
#include "sockopt/io.hpp"
#include "sockopt/policies.hpp"

namespace sockopt {

namespace {

struct Parser {
  std::string name;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
  }

  double to_double(const std::string& v) const {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
      fail("expected a number, got '" + v + "'");
    }
    return x;
  }

  long long to_int(const std::string& v) const {
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
      fail("expected an integer, got '" + v + "'");
    }
    return x;
  }

  std::uint64_t to_uint64(const std::string& v) const {
    errno = 0;
    char* end = nullptr;
    if (!v.empty() && v[0] == '-') fail("expected a nonnegative integer");
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
      fail("expected a nonnegative integer, got '" + v + "'");
    }
    return x;
  }

  bool to_bool(const std::string& v) const {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    fail("expected true/false, got '" + v + "'");
  }
};

}  // namespace

RunConfig default_run_config() {
  RunConfig config;
  config.sim.policy.kind = PolicyKind::kGreedy;
  return config;
}

RunConfig parse_config_text(const std::string& name,
                            const std::string& text) {
  RunConfig config = default_run_config();
  Parser p{name, 0};
  std::set<std::string> seen;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++p.line;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) p.fail("empty key");
    if (value.empty()) p.fail("empty value for '" + key + "'");
    if (!seen.insert(key).second) p.fail("duplicate key '" + key + "'");

    if (key == "T") {
      config.sim.T = static_cast<int>(p.to_int(value));
    } else if (key == "kappa") {
      config.sim.kappa = static_cast<int>(p.to_int(value));
    } else if (key == "b") {
      config.sim.agent.budget = p.to_double(value);
    } else if (key == "theta") {
      config.sim.theta = static_cast<int>(p.to_int(value));
    } else if (key == "d") {
      config.sim.d = p.to_double(value);
    } else if (key == "rho") {
      config.sim.agent.rho = p.to_double(value);
    } else if (key == "chi") {
      config.sim.agent.chi = p.to_double(value);
    } else if (key == "gamma") {
      config.sim.agent.gamma = p.to_double(value);
    } else if (key == "alpha") {
      config.catalogue_spec.alpha = p.to_double(value);
    } else if (key == "delta") {
      config.sim.agent.delta = p.to_double(value);
    } else if (key == "lambda") {
      config.sim.agent.lambda = p.to_double(value);
    } else if (key == "policy") {
      config.sim.policy.kind = policy_from_name(value);
    } else if (key == "tau_eta") {
      config.sim.policy.tau_eta = p.to_double(value);
    } else if (key == "tau_xi") {
      config.sim.policy.tau_xi = p.to_double(value);
    } else if (key == "replenishment") {
      config.sim.replenishment = p.to_bool(value);
    } else if (key == "seed") {
      config.has_seed = true;
      config.seed = p.to_uint64(value);
    } else if (key == "catalogue") {
      config.catalogue_path = value;
    } else if (key == "n_designs") {
      config.catalogue_spec.n_designs = static_cast<int>(p.to_int(value));
    } else if (key == "feature_sizes") {
      std::vector<int> sizes;
      for (const std::string& f : split_on(value, ',')) {
        sizes.push_back(static_cast<int>(p.to_int(trim(f))));
      }
      config.catalogue_spec.feature_sizes = std::move(sizes);
    } else if (key == "price_min") {
      config.catalogue_spec.price_min = static_cast<int>(p.to_int(value));
    } else if (key == "price_max") {
      config.catalogue_spec.price_max = static_cast<int>(p.to_int(value));
    } else if (key == "diversity_metric") {
      if (value == "entropy") {
        config.sim.diversity_metric = DiversityMetric::kEntropy;
      } else if (value == "dispersion") {
        config.sim.diversity_metric = DiversityMetric::kDispersion;
      } else {
        p.fail("diversity_metric must be entropy or dispersion");
      }
    } else if (key == "diversity_times") {
      config.sim.diversity_at_start = false;
      config.sim.diversity_at_end = false;
      if (value != "none") {
        for (const std::string& raw : split_on(value, ',')) {
          const std::string tok = trim(raw);
          if (tok == "0") {
            config.sim.diversity_at_start = true;
          } else if (tok == "T") {
            config.sim.diversity_at_end = true;
          } else {
            p.fail("diversity_times entries must be 0, T, or none");
          }
        }
      }
    } else {
      p.fail("unknown key '" + key + "'");
    }
  }
  return config;
}

RunConfig load_config_file(const std::string& path) {
  return parse_config_text(path, read_text_file(path));
}

std::string config_to_text(const RunConfig& config) {
  std::string out;
  const auto kv = [&out](const std::string& k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  kv("T", std::to_string(config.sim.T));
  kv("kappa", std::to_string(config.sim.kappa));
  kv("b", fmt_full(config.sim.agent.budget));
  kv("theta", std::to_string(config.sim.theta));
  kv("d", fmt_full(config.sim.d));
  kv("rho", fmt_full(config.sim.agent.rho));
  kv("chi", fmt_full(config.sim.agent.chi));
  kv("gamma", fmt_full(config.sim.agent.gamma));
  kv("alpha", fmt_full(config.catalogue_spec.alpha));
  kv("delta", fmt_full(config.sim.agent.delta));
  kv("lambda", fmt_full(config.sim.agent.lambda));
  kv("policy", policy_name(config.sim.policy.kind));
  kv("tau_eta", fmt_full(config.sim.policy.tau_eta));
  kv("tau_xi", fmt_full(config.sim.policy.tau_xi));
  kv("replenishment", config.sim.replenishment ? "true" : "false");
  std::string times;
  if (config.sim.diversity_at_start) times = "0";
  if (config.sim.diversity_at_end) {
    if (!times.empty()) times += ',';
    times += 'T';
  }
  kv("diversity_times", times.empty() ? "none" : times);
  kv("diversity_metric",
     config.sim.diversity_metric == DiversityMetric::kEntropy ? "entropy"
                                                              : "dispersion");
  if (!config.catalogue_path.empty()) kv("catalogue", config.catalogue_path);
  kv("n_designs", std::to_string(config.catalogue_spec.n_designs));
  std::string sizes;
  for (std::size_t i = 0; i < config.catalogue_spec.feature_sizes.size();
       ++i) {
    if (i) sizes += ',';
    sizes += std::to_string(config.catalogue_spec.feature_sizes[i]);
  }
  kv("feature_sizes", sizes);
  kv("price_min", std::to_string(config.catalogue_spec.price_min));
  kv("price_max", std::to_string(config.catalogue_spec.price_max));
  if (config.has_seed) kv("seed", std::to_string(config.seed));
  return out;
}

}  // namespace sockopt
