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
// The three packaged studies: a reference comparison of all policies, a
// loss-and-wear stress grid over (theta, d), and a tolerance trade-off
// sweep against the Purist baseline with knee-point and Pareto analysis.
// Replications are paired: replication r consumes identical exposure/wash/
// purchase streams under every policy, so metric differences are
// low-variance.

#ifndef SOCKOPT_EXPERIMENTS_HPP_
#define SOCKOPT_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sockopt/environment.hpp"
#include "sockopt/metrics.hpp"
#include "sockopt/policies.hpp"

namespace sockopt {

// Runs fn(0..n-1) across up to `jobs` threads. Outputs must be written to
// per-index slots; results are then independent of scheduling order. The
// first exception (if any) is rethrown on the calling thread.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

// Policy set used by the reference experiment (all five) and by the grid
// (the four pairing policies the stress tables report on).
std::vector<PolicySpec> default_reference_policies();
std::vector<PolicySpec> default_grid_policies();

struct PolicyRunSet {
  PolicySpec spec;
  std::vector<RunMetrics> runs;  // indexed by replication
  RunAggregate agg;
};

std::vector<PolicyRunSet> experiment_reference(
    const Catalogue& catalogue, const SimConfig& base,
    std::span<const PolicySpec> policies, int n_reps, std::uint64_t seed,
    int jobs);

struct GridSpec {
  std::vector<double> d_values = {0.0, 0.03, 0.06, 0.09, 0.12, 0.15};
  std::vector<int> theta_values = {15, 25, 40};
  int replications = 60;

  void validate() const;  // nonempty grids, replications >= 2
};

struct GridCell {
  int theta = 0;
  double d = 0.0;
  PolicySpec policy;
  std::vector<RunMetrics> runs;
  RunAggregate agg;
};

// One cell per (theta, d, policy), in that nesting order.
std::vector<GridCell> experiment_grid(const Catalogue& catalogue,
                                      const SimConfig& base,
                                      const GridSpec& grid,
                                      std::span<const PolicySpec> policies,
                                      std::uint64_t seed, int jobs);

struct TradeOffPoint {
  PolicyKind kind = PolicyKind::kThresholdMix;
  double tau_xi = 0.0;
  // Policy minus Purist baseline on matched seeds: positive d_soc is
  // additional social cost; negative d_money/d_eco are savings.
  double d_soc = 0.0;
  double d_money = 0.0;
  double d_eco = 0.0;
};

struct TradeOffResult {
  std::vector<TradeOffPoint> points;  // tuned families x tau grid
  std::vector<RunMetrics> baseline;   // Purist runs (tau_eta = 0)
};

std::vector<double> default_tau_xi_grid();  // 1.00, 0.95, ..., 0.70

TradeOffResult experiment_tradeoff(const Catalogue& catalogue,
                                   const SimConfig& base,
                                   std::span<const double> tau_xi_grid,
                                   int n_reps, std::uint64_t seed, int jobs);

struct KneeResult {
  bool defined = false;
  std::size_t index = 0;  // into the input span
};

// Point with the largest marginal savings per unit of added social cost
// between consecutive points sorted by cost; pairs are (social cost,
// savings). Ties resolve to the smaller cost; undefined with fewer than two
// distinct costs.
KneeResult knee_point(std::span<const std::pair<double, double>> points);

// Indices of points not dominated in (lower cost, higher savings), ordered
// by cost ascending (stable for equal costs).
std::vector<std::size_t> pareto_front(
    std::span<const std::pair<double, double>> points);

// Rank correlation with average ranks on ties.
double spearman_correlation(std::span<const double> x,
                            std::span<const double> y);

// CSV emission. Aggregate rows use the summary-table schema
// policy,n_socks,cost_money,cost_eco,cost_soc,infeasible_days,stranded
// followed by the matching _ci columns (empty when unavailable).
std::string reference_to_csv(std::span<const PolicyRunSet> sets);
std::string replications_to_csv(const std::string& policy,
                                std::span<const RunMetrics> runs);
std::string grid_to_csv(std::span<const GridCell> cells);
// Plot-data series, long format: metric,theta,d,policy,mean.
std::string grid_series_to_csv(std::span<const GridCell> cells);
std::string tradeoff_to_csv(std::span<const TradeOffPoint> points);
// Knee/Pareto annotations per tuned family, as a JSON document.
std::string tradeoff_annotations_json(const TradeOffResult& result);

}  // namespace sockopt

#endif  // SOCKOPT_EXPERIMENTS_HPP_
