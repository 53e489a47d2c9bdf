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
// Flat key = value run configuration. Defaults are the reference setup
// (365-day horizon, wash batch 14, budget 200, theta 50, d 0.02, rho 0.5,
// chi 1.25, delta 0.5, gamma 1.02, lambda 0, alpha 1). Unknown or duplicate
// keys are errors; '#' starts a comment.

#ifndef SOCKOPT_CONFIG_HPP_
#define SOCKOPT_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "sockopt/catalogue.hpp"
#include "sockopt/environment.hpp"

namespace sockopt {

struct RunConfig {
  SimConfig sim;
  CatalogueSpec catalogue_spec;
  std::string catalogue_path;  // empty: generate from catalogue_spec
  bool has_seed = false;
  std::uint64_t seed = 0;
};

RunConfig default_run_config();

// Parses `key = value` lines. Recognized keys: T, kappa, b, theta, d, rho,
// chi, gamma, alpha, delta, lambda, policy, tau_eta, tau_xi, replenishment,
// seed, catalogue, n_designs, feature_sizes, price_min, price_max,
// diversity_metric, diversity_times. Throws ConfigError with name:line.
RunConfig parse_config_text(const std::string& name, const std::string& text);
RunConfig load_config_file(const std::string& path);

// Canonical resolved snapshot (stable key order); parses back losslessly.
std::string config_to_text(const RunConfig& config);

}  // namespace sockopt

#endif  // SOCKOPT_CONFIG_HPP_
