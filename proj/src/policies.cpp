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

#include "sockopt/policies.hpp"

#include <cmath>
#include <limits>

#include "sockopt/errors.hpp"

namespace sockopt {

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kPurist:
      return "purist";
    case PolicyKind::kGreedy:
      return "greedy";
    case PolicyKind::kThresholdMix:
      return "threshold_mix";
    case PolicyKind::kOrphanRescue:
      return "orphan_rescue";
    case PolicyKind::kExposureAware:
      return "exposure_aware";
  }
  return "unknown";
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "purist") return PolicyKind::kPurist;
  if (name == "greedy") return PolicyKind::kGreedy;
  if (name == "threshold_mix") return PolicyKind::kThresholdMix;
  if (name == "orphan_rescue") return PolicyKind::kOrphanRescue;
  if (name == "exposure_aware") return PolicyKind::kExposureAware;
  throw ConfigError(
      "unknown policy '" + name +
      "' (expected purist|greedy|threshold_mix|orphan_rescue|"
      "exposure_aware)");
}

namespace {

int remaining_capacity(const SockInstance& s) { return s.theta - s.tau; }

// Shared tie-break: lower eta, then lower combined remaining capacity, then
// lower instance-id pair.
struct TieKey {
  double eta;
  long long combined_remaining;
  std::uint32_t lo_id;
  std::uint32_t hi_id;

  TieKey(const SockInstance& x, const SockInstance& y, double pair_eta)
      : eta(pair_eta),
        combined_remaining(static_cast<long long>(remaining_capacity(x)) +
                           remaining_capacity(y)),
        lo_id(x.id < y.id ? x.id : y.id),
        hi_id(x.id < y.id ? y.id : x.id) {}

  bool operator<(const TieKey& o) const {
    if (eta != o.eta) return eta < o.eta;
    if (combined_remaining != o.combined_remaining)
      return combined_remaining < o.combined_remaining;
    if (lo_id != o.lo_id) return lo_id < o.lo_id;
    return hi_id < o.hi_id;
  }
};

// Scans all pairs, keeping the maximal score; candidates with score below
// `floor` are skipped entirely (used for threshold filters).
template <typename ScoreFn, typename AdmitFn>
PairChoice best_pair(std::span<const SockInstance> inv, const EtaFn& eta,
                     ScoreFn score, AdmitFn admit) {
  PairChoice best;
  double best_score = -std::numeric_limits<double>::infinity();
  TieKey best_key(SockInstance{}, SockInstance{}, 0.0);
  for (std::size_t i = 0; i < inv.size(); ++i) {
    for (std::size_t j = i + 1; j < inv.size(); ++j) {
      const double e = eta(inv[i], inv[j]);
      if (!admit(e)) continue;
      const double s = score(e);
      const TieKey key(inv[i], inv[j], e);
      if (!best.found || s > best_score ||
          (s == best_score && key < best_key)) {
        best.found = true;
        best.a = i;
        best.b = j;
        best.eta = e;
        best.xi = 1.0 - e;
        best_score = s;
        best_key = key;
      }
    }
  }
  return best;
}

}  // namespace

PairChoice select_purist(std::span<const SockInstance> inventory,
                         const EtaFn& eta, double tau_eta) {
  return best_pair(
      inventory, eta, [](double e) { return 1.0 - e; },
      [tau_eta](double e) { return e <= tau_eta; });
}

PairChoice select_greedy(std::span<const SockInstance> inventory,
                         const EtaFn& eta) {
  return best_pair(
      inventory, eta, [](double e) { return 1.0 - e; },
      [](double) { return true; });
}

PairChoice select_threshold_mix(std::span<const SockInstance> inventory,
                                const EtaFn& eta, double tau_xi) {
  PairChoice above = best_pair(
      inventory, eta, [](double e) { return 1.0 - e; },
      [tau_xi](double e) { return 1.0 - e >= tau_xi; });
  if (above.found) return above;
  return select_greedy(inventory, eta);
}

PairChoice select_orphan_rescue(std::span<const SockInstance> inventory,
                                const EtaFn& eta, double tau_xi) {
  if (inventory.size() < 2) return PairChoice{};

  // deg(s) = number of partners with xi >= tau_xi; rescue the most orphaned
  // sock first (ties: lower remaining capacity, then lower id).
  std::size_t pick = 0;
  long long pick_deg = -1;
  for (std::size_t i = 0; i < inventory.size(); ++i) {
    long long deg = 0;
    for (std::size_t j = 0; j < inventory.size(); ++j) {
      if (j == i) continue;
      if (1.0 - eta(inventory[i], inventory[j]) >= tau_xi) ++deg;
    }
    if (pick_deg < 0 || deg < pick_deg ||
        (deg == pick_deg &&
         (remaining_capacity(inventory[i]) <
              remaining_capacity(inventory[pick]) ||
          (remaining_capacity(inventory[i]) ==
               remaining_capacity(inventory[pick]) &&
           inventory[i].id < inventory[pick].id)))) {
      pick = i;
      pick_deg = deg;
    }
  }

  PairChoice best;
  double best_score = -std::numeric_limits<double>::infinity();
  TieKey best_key(SockInstance{}, SockInstance{}, 0.0);
  for (std::size_t j = 0; j < inventory.size(); ++j) {
    if (j == pick) continue;
    const double e = eta(inventory[pick], inventory[j]);
    const double s = 1.0 - e;
    const TieKey key(inventory[pick], inventory[j], e);
    if (!best.found || s > best_score ||
        (s == best_score && key < best_key)) {
      best.found = true;
      best.a = pick < j ? pick : j;
      best.b = pick < j ? j : pick;
      best.eta = e;
      best.xi = s;
      best_score = s;
      best_key = key;
    }
  }
  return best;
}

PairChoice select_exposure_aware(std::span<const SockInstance> inventory,
                                 const EtaFn& eta,
                                 const AgentParams& agent) {
  const double rho = agent.rho;
  const double chi = agent.chi;
  const double gamma = agent.gamma;
  return best_pair(
      inventory, eta,
      [rho, chi, gamma](double e) {
        const double penalty = e > 0.0 ? rho * chi * std::pow(e, gamma) : 0.0;
        return (1.0 - e) - penalty;
      },
      [](double) { return true; });
}

PairChoice select_pair(const PolicySpec& spec,
                       std::span<const SockInstance> inventory,
                       const EtaFn& eta, const AgentParams& agent) {
  switch (spec.kind) {
    case PolicyKind::kPurist:
      return select_purist(inventory, eta, spec.tau_eta);
    case PolicyKind::kGreedy:
      return select_greedy(inventory, eta);
    case PolicyKind::kThresholdMix:
      return select_threshold_mix(inventory, eta, spec.tau_xi);
    case PolicyKind::kOrphanRescue:
      return select_orphan_rescue(inventory, eta, spec.tau_xi);
    case PolicyKind::kExposureAware:
      return select_exposure_aware(inventory, eta, agent);
  }
  return PairChoice{};
}

bool pair_acceptable(const PolicySpec& spec, double eta) {
  switch (spec.kind) {
    case PolicyKind::kPurist:
      return eta <= spec.tau_eta;
    case PolicyKind::kThresholdMix:
    case PolicyKind::kOrphanRescue:
      return 1.0 - eta >= spec.tau_xi;
    case PolicyKind::kGreedy:
    case PolicyKind::kExposureAware:
      return true;
  }
  return true;
}

}  // namespace sockopt
