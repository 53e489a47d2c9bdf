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
// Cost/reward accounting for a simulated run: per-day records, the four
// cost channels (money, eco, social, stranded capacity), diversity utility,
// and mean +/- normal 95% confidence-interval aggregation across
// replications.

#ifndef SOCKOPT_METRICS_HPP_
#define SOCKOPT_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "sockopt/policies.hpp"

namespace sockopt {

struct PurchaseRecord {
  std::uint32_t design = 0;
  int price = 0;
  double eco = 0.0;
};

// One simulated day. Day 0 carries the initial purchase and no wear.
struct DayRecord {
  int day = 0;
  bool feasible = true;
  bool exposed = false;  // Z_t
  bool has_pair = false;
  std::uint32_t sock1 = 0;
  std::uint32_t sock2 = 0;
  double eta = 0.0;
  double social_cost = 0.0;
  std::vector<PurchaseRecord> purchases;
  int washed = 0;
  int lost = 0;
  double lost_capacity = 0.0;  // sum of (theta - tau) over socks lost today
};

struct RunMetrics {
  long long socks_purchased = 0;
  double money = 0.0;   // C_$: total spend
  double eco = 0.0;     // C_eco: total footprint of purchases
  double social = 0.0;  // C_soc: accumulated social cost
  long long infeasible_days = 0;
  double stranded_loss = 0.0;      // capacity destroyed by wash losses
  double stranded_terminal = 0.0;  // end-horizon unpairable capacity
  double stranded = 0.0;           // sum of the two components
  long long total_wears = 0;
  double reward_total = 0.0;
};

// Z * chi * eta^gamma; exactly zero when not exposed or eta == 0.
double social_cost(double eta, double chi, bool exposed, double gamma);

// -(sum over purchases of price + lambda * eco) - social cost.
double day_reward(const DayRecord& day, const AgentParams& agent);

enum class DiversityMetric {
  kEntropy,     // Shannon entropy (natural log) over design ids
  kDispersion,  // mean pairwise feature dissimilarity
};

// Shannon entropy (natural log) of the empirical distribution given by
// non-negative counts; zero when at most one positive count.
double shannon_entropy(std::span<const long long> counts);

double diversity(std::span<const SockInstance> socks, const EtaFn& eta,
                 DiversityMetric metric);

// delta * D(S).
double diversity_utility(double delta, double diversity_value);

// Remaining capacity (theta - tau) summed over socks that no other sock in
// the inventory can acceptably partner under the given policy.
double terminal_stranded_capacity(std::span<const SockInstance> inventory,
                                  const EtaFn& eta, const PolicySpec& spec);

struct MetricSummary {
  double mean = 0.0;
  double ci_half = 0.0;  // 1.96 * sample sd / sqrt(n)
  bool has_ci = false;   // false when n < 2
};

MetricSummary summarize(std::span<const double> values);

struct RunAggregate {
  MetricSummary socks_purchased;
  MetricSummary money;
  MetricSummary eco;
  MetricSummary social;
  MetricSummary infeasible_days;
  MetricSummary stranded;
  MetricSummary total_wears;
  MetricSummary reward_total;
};

RunAggregate aggregate(std::span<const RunMetrics> runs);

}  // namespace sockopt

#endif  // SOCKOPT_METRICS_HPP_
