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
// The daily sock-ownership simulation. Each day: (1) draw the exposure
// indicator, (2) replenish when fewer than two socks are available (if
// enabled), washing the laundry buffer early when the agent is out of socks,
// (3) let the policy pick a pair or record an infeasible day, (4) wear the
// pair and retire socks that reach their wear capacity, (5) move worn socks
// to the laundry and wash the whole buffer once it reaches kappa, losing
// each sock independently with probability d.
//
// Exposure, wash, and purchase draws come from independent counter-based
// streams keyed by (seed, replication, stream name), so matched replications
// across policies share identical randomness and results do not depend on
// scheduling.

#ifndef SOCKOPT_ENVIRONMENT_HPP_
#define SOCKOPT_ENVIRONMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sockopt/catalogue.hpp"
#include "sockopt/metrics.hpp"
#include "sockopt/policies.hpp"
#include "sockopt/rng.hpp"

namespace sockopt {

struct SimConfig {
  int T = 365;       // horizon in days
  int kappa = 14;    // laundry batch size
  int theta = 50;    // wear capacity per sock
  double d = 0.02;   // per-wash loss probability
  AgentParams agent;
  PolicySpec policy;
  bool replenishment = true;
  DiversityMetric diversity_metric = DiversityMetric::kEntropy;
  bool diversity_at_start = true;  // add delta * D(S) at t = 0
  bool diversity_at_end = false;   // and/or at t = T

  void validate() const;  // throws ConfigError on out-of-range values
};

// Nearest integer with ties to even.
double round_half_even(double x);

// 1 + round_half_even(delta * (n_designs - 1)); delta in [0, 1].
int active_subset_size(double delta, int n_designs);

// Washes the whole buffer: each sock independently survives with
// probability 1 - d (one draw per sock, in id order).
struct WashOutcome {
  std::vector<SockInstance> returned;
  std::vector<SockInstance> lost;
};
WashOutcome wash_buffer(const std::vector<SockInstance>& buffer,
                        RngStream& wash_stream);

struct SimResult {
  RunMetrics metrics;
  // Day 0 carries the initial purchase; days 1..T the daily dynamics.
  // Populated only when the trace is requested.
  std::vector<DayRecord> days;
  std::vector<SockInstance> end_inventory;
  std::vector<SockInstance> end_laundry;
  double diversity_start = 0.0;
  double diversity_end = 0.0;
};

class Simulation {
 public:
  Simulation(const Catalogue& catalogue, const SimConfig& config,
             std::uint64_t seed, std::uint64_t replication);

  // Samples the active design subset and buys pairs until no active design
  // is affordable. Call exactly once, before any step_day().
  DayRecord initial_purchase();

  // Advances one day and returns its record.
  DayRecord step_day();

  // initial_purchase + T days + final accounting.
  SimResult run(bool keep_trace = false);

  const std::vector<SockInstance>& available() const { return available_; }
  const std::vector<SockInstance>& laundry() const { return laundry_; }
  const std::vector<std::size_t>& active_designs() const { return active_; }
  double remaining_budget() const { return remaining_budget_; }
  long long worn_out_count() const { return worn_out_; }
  long long lost_count() const { return lost_; }
  int day() const { return day_; }
  const RunMetrics& metrics() const { return metrics_; }

 private:
  DayRecord finish_day(DayRecord rec);
  void buy_sock(std::size_t design, DayRecord* rec);
  void run_wash(DayRecord* rec);
  double eta_of(const SockInstance& a, const SockInstance& b) const {
    return catalogue_->eta(a.design, b.design);
  }

  const Catalogue* catalogue_;
  SimConfig config_;
  RngStream exposure_;
  RngStream wash_;
  RngStream purchase_;
  std::vector<std::size_t> active_;
  std::vector<SockInstance> available_;  // sorted by instance id
  std::vector<SockInstance> laundry_;    // sorted by instance id
  double remaining_budget_ = 0.0;
  std::uint32_t next_id_ = 0;
  bool purchased_ = false;
  bool replenishment_exhausted_ = false;
  long long worn_out_ = 0;
  long long lost_ = 0;
  int day_ = 0;
  RunMetrics metrics_;
  double reward_days_ = 0.0;
};

// Convenience wrapper: one full replication.
SimResult run_simulation(const Catalogue& catalogue, const SimConfig& config,
                         std::uint64_t seed, std::uint64_t replication,
                         bool keep_trace = false);

// Trace CSV (days 1..T):
// day,Z,feasible,sock1,sock2,eta,soc_cost,washed,lost
std::string trace_to_csv(std::span<const DayRecord> days);

}  // namespace sockopt

#endif  // SOCKOPT_ENVIRONMENT_HPP_
