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

#include "sockopt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "sockopt/errors.hpp"
#include "sockopt/io.hpp"

namespace sockopt {

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (jobs == 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  const int workers = std::min(jobs, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<PolicySpec> default_reference_policies() {
  PolicySpec purist{PolicyKind::kPurist, 0.0, 0.7};
  PolicySpec greedy{PolicyKind::kGreedy, 0.0, 0.7};
  PolicySpec mix{PolicyKind::kThresholdMix, 0.0, 0.8};
  PolicySpec rescue{PolicyKind::kOrphanRescue, 0.0, 0.7};
  PolicySpec aware{PolicyKind::kExposureAware, 0.0, 0.7};
  return {purist, greedy, mix, rescue, aware};
}

std::vector<PolicySpec> default_grid_policies() {
  std::vector<PolicySpec> all = default_reference_policies();
  all.pop_back();  // the stress grid reports the four pairing policies
  return all;
}

std::vector<PolicyRunSet> experiment_reference(
    const Catalogue& catalogue, const SimConfig& base,
    std::span<const PolicySpec> policies, int n_reps, std::uint64_t seed,
    int jobs) {
  if (n_reps < 1) throw ConfigError("replications must be >= 1");
  std::vector<PolicyRunSet> out;
  for (const PolicySpec& spec : policies) {
    PolicyRunSet set;
    set.spec = spec;
    set.runs.resize(static_cast<std::size_t>(n_reps));
    SimConfig config = base;
    config.policy = spec;
    parallel_for(n_reps, jobs, [&](int r) {
      set.runs[static_cast<std::size_t>(r)] =
          run_simulation(catalogue, config, seed,
                         static_cast<std::uint64_t>(r))
              .metrics;
    });
    set.agg = aggregate(set.runs);
    out.push_back(std::move(set));
  }
  return out;
}

void GridSpec::validate() const {
  if (d_values.empty() || theta_values.empty()) {
    throw ConfigError("grid axes must be nonempty");
  }
  if (replications < 2) throw ConfigError("grid replications must be >= 2");
  for (double d : d_values) {
    if (d < 0.0 || d > 1.0) throw ConfigError("grid d values must lie in [0, 1]");
  }
  for (int theta : theta_values) {
    if (theta < 1) throw ConfigError("grid theta values must be >= 1");
  }
}

std::vector<GridCell> experiment_grid(const Catalogue& catalogue,
                                      const SimConfig& base,
                                      const GridSpec& grid,
                                      std::span<const PolicySpec> policies,
                                      std::uint64_t seed, int jobs) {
  grid.validate();
  std::vector<GridCell> cells;
  for (int theta : grid.theta_values) {
    for (double d : grid.d_values) {
      for (const PolicySpec& spec : policies) {
        GridCell cell;
        cell.theta = theta;
        cell.d = d;
        cell.policy = spec;
        cell.runs.resize(static_cast<std::size_t>(grid.replications));
        SimConfig config = base;
        config.theta = theta;
        config.d = d;
        config.policy = spec;
        parallel_for(grid.replications, jobs, [&](int r) {
          cell.runs[static_cast<std::size_t>(r)] =
              run_simulation(catalogue, config, seed,
                             static_cast<std::uint64_t>(r))
                  .metrics;
        });
        cell.agg = aggregate(cell.runs);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<double> default_tau_xi_grid() {
  return {1.00, 0.95, 0.90, 0.85, 0.80, 0.75, 0.70};
}

TradeOffResult experiment_tradeoff(const Catalogue& catalogue,
                                   const SimConfig& base,
                                   std::span<const double> tau_xi_grid,
                                   int n_reps, std::uint64_t seed, int jobs) {
  if (tau_xi_grid.empty()) throw ConfigError("tau_xi grid must be nonempty");
  if (n_reps < 1) throw ConfigError("replications must be >= 1");

  TradeOffResult result;
  result.baseline.resize(static_cast<std::size_t>(n_reps));
  SimConfig purist = base;
  purist.policy = PolicySpec{PolicyKind::kPurist, 0.0, 0.7};
  parallel_for(n_reps, jobs, [&](int r) {
    result.baseline[static_cast<std::size_t>(r)] =
        run_simulation(catalogue, purist, seed, static_cast<std::uint64_t>(r))
            .metrics;
  });
  const RunAggregate base_agg = aggregate(result.baseline);

  const PolicyKind families[] = {PolicyKind::kThresholdMix,
                                 PolicyKind::kOrphanRescue};
  for (PolicyKind kind : families) {
    for (double tau : tau_xi_grid) {
      SimConfig config = base;
      config.policy = PolicySpec{kind, 0.0, tau};
      std::vector<RunMetrics> runs(static_cast<std::size_t>(n_reps));
      parallel_for(n_reps, jobs, [&](int r) {
        runs[static_cast<std::size_t>(r)] =
            run_simulation(catalogue, config, seed,
                           static_cast<std::uint64_t>(r))
                .metrics;
      });
      const RunAggregate agg = aggregate(runs);
      TradeOffPoint p;
      p.kind = kind;
      p.tau_xi = tau;
      p.d_soc = agg.social.mean - base_agg.social.mean;
      p.d_money = agg.money.mean - base_agg.money.mean;
      p.d_eco = agg.eco.mean - base_agg.eco.mean;
      result.points.push_back(p);
    }
  }
  return result;
}

KneeResult knee_point(std::span<const std::pair<double, double>> points) {
  // Collapse points sharing a cost to the best savings at that cost, then
  // scan marginal savings/cost ratios between consecutive collapsed points.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return points[a].first < points[b].first;
                   });
  std::vector<std::size_t> collapsed;
  for (std::size_t idx : order) {
    if (!collapsed.empty() &&
        points[collapsed.back()].first == points[idx].first) {
      if (points[idx].second > points[collapsed.back()].second) {
        collapsed.back() = idx;
      }
    } else {
      collapsed.push_back(idx);
    }
  }
  KneeResult res;
  if (collapsed.size() < 2) return res;
  double best_ratio = 0.0;
  for (std::size_t i = 1; i < collapsed.size(); ++i) {
    const auto& prev = points[collapsed[i - 1]];
    const auto& cur = points[collapsed[i]];
    const double ratio = (cur.second - prev.second) / (cur.first - prev.first);
    if (!res.defined || ratio > best_ratio) {
      res.defined = true;
      res.index = collapsed[i];
      best_ratio = ratio;
    }
  }
  return res;
}

std::vector<std::size_t> pareto_front(
    std::span<const std::pair<double, double>> points) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool leq = points[j].first <= points[i].first &&
                       points[j].second >= points[i].second;
      const bool strict = points[j].first < points[i].first ||
                          points[j].second > points[i].second;
      if (leq && strict) dominated = true;
    }
    if (!dominated) front.push_back(i);
  }
  std::stable_sort(front.begin(), front.end(),
                   [&](std::size_t a, std::size_t b) {
                     return points[a].first < points[b].first;
                   });
  return front;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("correlation inputs have different lengths");
  }
  if (x.size() < 2) return 0.0;
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
    sxy += (rx[i] - mx) * (ry[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

void append_summary(std::string* out, const MetricSummary& s) {
  *out += fmt_full(s.mean);
}

void append_ci(std::string* out, const MetricSummary& s) {
  if (s.has_ci) *out += fmt_full(s.ci_half);
}

void append_aggregate_row(std::string* out, const RunAggregate& agg) {
  const MetricSummary* means[] = {&agg.socks_purchased, &agg.money, &agg.eco,
                                  &agg.social, &agg.infeasible_days,
                                  &agg.stranded};
  for (const MetricSummary* m : means) {
    *out += ',';
    append_summary(out, *m);
  }
  for (const MetricSummary* m : means) {
    *out += ',';
    append_ci(out, *m);
  }
  *out += '\n';
}

constexpr const char* kAggregateColumns =
    "n_socks,cost_money,cost_eco,cost_soc,infeasible_days,stranded,"
    "n_socks_ci,cost_money_ci,cost_eco_ci,cost_soc_ci,infeasible_days_ci,"
    "stranded_ci";

}  // namespace

std::string reference_to_csv(std::span<const PolicyRunSet> sets) {
  std::string out = std::string("policy,") + kAggregateColumns + "\n";
  for (const PolicyRunSet& set : sets) {
    out += policy_name(set.spec.kind);
    append_aggregate_row(&out, set.agg);
  }
  return out;
}

std::string replications_to_csv(const std::string& policy,
                                std::span<const RunMetrics> runs) {
  std::string out =
      "policy,replication,n_socks,cost_money,cost_eco,cost_soc,"
      "infeasible_days,stranded_loss,stranded_terminal,stranded,total_wears,"
      "reward_total\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const RunMetrics& m = runs[r];
    out += policy;
    out += ',';
    out += std::to_string(r);
    out += ',';
    out += std::to_string(m.socks_purchased);
    out += ',';
    out += fmt_full(m.money);
    out += ',';
    out += fmt_full(m.eco);
    out += ',';
    out += fmt_full(m.social);
    out += ',';
    out += std::to_string(m.infeasible_days);
    out += ',';
    out += fmt_full(m.stranded_loss);
    out += ',';
    out += fmt_full(m.stranded_terminal);
    out += ',';
    out += fmt_full(m.stranded);
    out += ',';
    out += std::to_string(m.total_wears);
    out += ',';
    out += fmt_full(m.reward_total);
    out += '\n';
  }
  return out;
}

std::string grid_to_csv(std::span<const GridCell> cells) {
  std::string out = std::string("theta,d,policy,") + kAggregateColumns + "\n";
  for (const GridCell& cell : cells) {
    out += std::to_string(cell.theta);
    out += ',';
    out += fmt_full(cell.d);
    out += ',';
    out += policy_name(cell.policy.kind);
    append_aggregate_row(&out, cell.agg);
  }
  return out;
}

std::string grid_series_to_csv(std::span<const GridCell> cells) {
  std::string out = "metric,theta,d,policy,mean\n";
  const auto emit = [&](const char* metric,
                        const std::function<double(const GridCell&)>& get) {
    for (const GridCell& cell : cells) {
      out += metric;
      out += ',';
      out += std::to_string(cell.theta);
      out += ',';
      out += fmt_full(cell.d);
      out += ',';
      out += policy_name(cell.policy.kind);
      out += ',';
      out += fmt_full(get(cell));
      out += '\n';
    }
  };
  emit("n_socks",
       [](const GridCell& c) { return c.agg.socks_purchased.mean; });
  emit("infeasible_days",
       [](const GridCell& c) { return c.agg.infeasible_days.mean; });
  emit("stranded", [](const GridCell& c) { return c.agg.stranded.mean; });
  return out;
}

std::string tradeoff_to_csv(std::span<const TradeOffPoint> points) {
  std::string out = "policy,tau_xi,d_soc,d_money,d_eco\n";
  for (const TradeOffPoint& p : points) {
    out += policy_name(p.kind);
    out += ',';
    out += fmt_full(p.tau_xi);
    out += ',';
    out += fmt_full(p.d_soc);
    out += ',';
    out += fmt_full(p.d_money);
    out += ',';
    out += fmt_full(p.d_eco);
    out += '\n';
  }
  return out;
}

std::string tradeoff_annotations_json(const TradeOffResult& result) {
  nlohmann::json doc;
  const PolicyKind families[] = {PolicyKind::kThresholdMix,
                                 PolicyKind::kOrphanRescue};
  for (PolicyKind kind : families) {
    std::vector<std::pair<double, double>> pts;
    std::vector<double> taus;
    for (const TradeOffPoint& p : result.points) {
      if (p.kind != kind) continue;
      // Savings are spend reductions relative to the baseline.
      pts.emplace_back(p.d_soc, -p.d_money);
      taus.push_back(p.tau_xi);
    }
    nlohmann::json entry;
    const KneeResult knee = knee_point(pts);
    entry["knee_defined"] = knee.defined;
    if (knee.defined) {
      entry["knee_tau_xi"] = taus[knee.index];
      entry["knee_d_soc"] = pts[knee.index].first;
      entry["knee_savings"] = pts[knee.index].second;
    }
    nlohmann::json front = nlohmann::json::array();
    for (std::size_t idx : pareto_front(pts)) front.push_back(taus[idx]);
    entry["pareto_tau_xi"] = std::move(front);
    doc[policy_name(kind)] = std::move(entry);
  }
  return doc.dump(2) + "\n";
}

}  // namespace sockopt
