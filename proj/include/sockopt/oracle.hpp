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
// Exact solvers for tiny planning instances, used as independent test
// oracles: a brute-force purchase-and-schedule optimizer, a 0-1 knapsack
// reduction with exact-rational compatibility values, an exact knapsack DP,
// and budgeted-maximum-coverage brute force vs. cost-benefit greedy.

#ifndef SOCKOPT_ORACLE_HPP_
#define SOCKOPT_ORACLE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sockopt/policies.hpp"
#include "sockopt/rng.hpp"

namespace sockopt {

// Nonnegative exact rational; comparisons and sums never round.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);  // normalizes; requires d > 0, n >= 0

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  Rational operator+(const Rational& o) const;
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return !(o < *this); }
  std::string str() const;  // "num/den"
};

// A purchase-and-schedule planning instance over individually priced socks
// with an explicit pairwise compatibility table.
struct SockPlanInstance {
  int T = 1;
  int kappa = 1;
  long long budget = 0;
  std::vector<long long> prices;           // one entry per candidate sock
  std::vector<int> theta;                  // wear capacity per sock
  std::vector<std::vector<Rational>> xi;   // symmetric; diagonal unused
  Rational threshold_k{0, 1};              // decision threshold K
  bool k_defined = true;    // false when the construction degenerates
  bool degenerate = false;  // all compatibilities zero

  std::size_t size() const { return prices.size(); }
  void validate() const;  // throws DataError on inconsistent fields
};

// One scheduled day in an oracle solution (class indices, not sock ids).
struct OracleDay {
  bool wear = false;
  int class_a = -1;
  int class_b = -1;
  Rational gain{0, 1};
};

struct SockPlanResult {
  Rational best{0, 1};                 // maximal total compatibility
  std::vector<int> purchased;          // count bought per sock class
  std::vector<OracleDay> schedule;     // length T
  // Interchangeable socks (equal price, theta, and compatibility rows)
  // grouped into classes; member sock indices per class.
  std::vector<std::vector<std::size_t>> classes;
};

// Exhaustive optimum over affordable purchase sets and wear schedules under
// deterministic dynamics (no wash loss). Sizes are guarded: T <= 6 and
// either <= 12 socks or <= 12 interchangeability classes with <= 32 socks.
// Throws GuardError beyond the guard.
SockPlanResult brute_force_sockplan(const SockPlanInstance& inst);

struct KnapsackInstance {
  std::vector<long long> weights;
  std::vector<long long> values;
  long long capacity = 0;
  long long target = 0;

  std::size_t size() const { return weights.size(); }
  void validate() const;  // nonnegative integers, aligned lengths
};

// Builds the planning instance whose optimum crosses K exactly when the
// knapsack target is reachable: item socks priced (n+1)*w_i pair only with
// their twin at value v_i/V_tot, plus 2n unit-price filler socks,
// b = 2(n+1)W + 2n, T = n, kappa = 2T+1, theta = 1, K = V/V_tot.
// (Scaling prices by n+1 keeps filler spend from distorting item capacity.)
SockPlanInstance knapsack_to_sockplan(const KnapsackInstance& k);

// Exact DP over capacity; guard n <= 20 and capacity <= 1e6.
long long solve_knapsack_exact(const KnapsackInstance& k);

// True iff the knapsack decision and the reduced planning decision agree.
bool verify_reduction(const KnapsackInstance& k);

// Weighted coverage: universe weights, candidate sets as element-index
// lists, integer costs, and a purchase budget.
struct CoverageInstance {
  std::vector<double> weights;
  std::vector<std::vector<int>> sets;
  std::vector<long long> costs;  // each >= 1
  long long budget = 0;

  void validate() const;
};

// Total weight of the union of the selected sets.
double coverage_value(const CoverageInstance& inst,
                      std::span<const std::size_t> selection);

struct CoverageResult {
  std::vector<std::size_t> selection;
  double value = 0.0;
};

// Cost-benefit greedy (best of greedy-by-ratio and best single affordable
// set), the standard budgeted-max-coverage approximation.
CoverageResult sock_design_greedy(const CoverageInstance& inst);

// Exhaustive optimum; guard <= 20 sets.
CoverageResult coverage_brute_force(const CoverageInstance& inst);

// Runs a pair-selection policy on a planning instance under the oracle's
// deterministic dynamics (all listed socks bought up front; worn socks
// queue for laundry; the buffer returns in full once it reaches kappa).
// Returns the exact accumulated compatibility; never exceeds
// brute_force_sockplan().best.
Rational policy_total_xi(const SockPlanInstance& inst, const PolicySpec& spec,
                         const AgentParams& agent);

// Random small instances for equivalence sweeps.
KnapsackInstance random_knapsack(RngStream& rng, int max_items = 6,
                                 long long max_weight_value = 9);
SockPlanInstance random_sockplan(RngStream& rng, int max_socks = 10,
                                 int max_days = 5);
CoverageInstance random_coverage(RngStream& rng, int max_sets = 10,
                                 int max_elements = 12);

// JSON round-trips. Knapsack: {"weights","values","capacity","target"};
// planning instance: {"T","kappa","budget","prices","theta","xi","K"} with
// rationals encoded as [num, den] pairs.
std::string knapsack_to_json(const KnapsackInstance& k);
KnapsackInstance knapsack_from_json(const std::string& text);
std::string sockplan_to_json(const SockPlanInstance& inst);
SockPlanInstance sockplan_from_json(const std::string& text);

}  // namespace sockopt

#endif  // SOCKOPT_ORACLE_HPP_
