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
// Daily pair-selection policies. Every policy is a pure function of the
// inventory snapshot and the pair dissimilarity; ties are broken
// deterministically and lexicographically by (lower dissimilarity, lower
// combined remaining wear capacity, lower instance ids), so a policy never
// consumes randomness and repeated calls agree bit-for-bit.

#ifndef SOCKOPT_POLICIES_HPP_
#define SOCKOPT_POLICIES_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace sockopt {

// One physical sock. `design` indexes the catalogue (or an oracle instance's
// sock list); `tau` is the number of completed wears, `theta` the lifetime
// wear capacity, `d` the per-wash loss probability.
struct SockInstance {
  std::uint32_t id = 0;
  std::uint32_t design = 0;
  int tau = 0;
  int theta = 1;
  double d = 0.0;
};

struct AgentParams {
  double budget = 200.0;  // b, monetary budget for the whole horizon
  double chi = 1.25;      // social sensitivity
  double delta = 0.5;     // diversity preference
  double rho = 0.5;       // daily exposure probability
  double gamma = 1.02;    // mismatch severity exponent
  double lambda = 0.0;    // eco-to-utility weight in the reward
};

enum class PolicyKind {
  kPurist,
  kGreedy,
  kThresholdMix,
  kOrphanRescue,
  kExposureAware,
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::kGreedy;
  double tau_eta = 0.0;  // purist: max tolerated dissimilarity
  double tau_xi = 0.7;   // threshold_mix / orphan_rescue: min compatibility
};

std::string policy_name(PolicyKind kind);
PolicyKind policy_from_name(const std::string& name);  // throws ConfigError

// Pair dissimilarity between two inventory socks, typically
// catalogue.eta(a.design, b.design) or an explicit oracle table.
using EtaFn =
    std::function<double(const SockInstance&, const SockInstance&)>;

struct PairChoice {
  bool found = false;
  std::size_t a = 0;  // indices into the inventory span
  std::size_t b = 0;
  double eta = 0.0;
  double xi = 0.0;
};

// Maximal-compatibility pair among pairs with eta <= tau_eta; not found when
// no pair qualifies (including |S| < 2).
PairChoice select_purist(std::span<const SockInstance> inventory,
                         const EtaFn& eta, double tau_eta);

// Maximal-compatibility pair; not found only when |S| < 2.
PairChoice select_greedy(std::span<const SockInstance> inventory,
                         const EtaFn& eta);

// If any pair reaches xi >= tau_xi, the maximal-compatibility pair among
// those; otherwise the overall maximal-compatibility pair.
PairChoice select_threshold_mix(std::span<const SockInstance> inventory,
                                const EtaFn& eta, double tau_xi);

// Picks the sock with the fewest partners at xi >= tau_xi (ties: lower
// remaining capacity, then lower id), then its maximal-compatibility
// partner.
PairChoice select_orphan_rescue(std::span<const SockInstance> inventory,
                                const EtaFn& eta, double tau_xi);

// Maximizes xi - rho * chi * eta^gamma (expected same-day score).
PairChoice select_exposure_aware(std::span<const SockInstance> inventory,
                                 const EtaFn& eta, const AgentParams& agent);

// Dispatch on spec.kind.
PairChoice select_pair(const PolicySpec& spec,
                       std::span<const SockInstance> inventory,
                       const EtaFn& eta, const AgentParams& agent);

// Policy-relative partner acceptability, used by the stranded-capacity
// accounting: purist accepts eta <= tau_eta, threshold policies accept
// xi >= tau_xi, greedy and exposure-aware accept any pair.
bool pair_acceptable(const PolicySpec& spec, double eta);

}  // namespace sockopt

#endif  // SOCKOPT_POLICIES_HPP_
