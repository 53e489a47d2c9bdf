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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>

#include "sockopt/catalogue.hpp"
#include "sockopt/environment.hpp"
#include "sockopt/errors.hpp"
#include "sockopt/experiments.hpp"
#include "sockopt/policies.hpp"

namespace {

using sockopt::Catalogue;
using sockopt::CatalogueSpec;
using sockopt::ConfigError;
using sockopt::GridCell;
using sockopt::GridSpec;
using sockopt::PolicyKind;
using sockopt::PolicyRunSet;
using sockopt::PolicySpec;
using sockopt::SimConfig;
using sockopt::TradeOffPoint;
using sockopt::TradeOffResult;

using PointList = std::vector<std::pair<double, double>>;

Catalogue test_catalogue(int n = 24, std::uint64_t seed = 5) {
  CatalogueSpec spec;
  spec.n_designs = n;
  spec.feature_sizes = {5, 4, 3};
  return sockopt::generate_catalogue(spec, seed);
}

SimConfig short_config() {
  SimConfig cfg;
  cfg.T = 60;
  cfg.theta = 20;
  cfg.d = 0.03;
  return cfg;
}

TEST_CASE("parallel_for covers every index exactly once") {
  for (int jobs : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(257);
    for (auto& h : hits) h.store(0);
    sockopt::parallel_for(257, jobs,
                          [&](int i) { hits[static_cast<std::size_t>(i)]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  SUBCASE("zero iterations run nothing") {
    sockopt::parallel_for(0, 4, [](int) { FAIL("must not be called"); });
  }
  SUBCASE("worker exceptions surface on the caller") {
    CHECK_THROWS_AS(sockopt::parallel_for(16, 4,
                                          [](int i) {
                                            if (i == 7) {
                                              throw std::runtime_error("boom");
                                            }
                                          }),
                    std::runtime_error);
  }
  SUBCASE("invalid job counts are rejected") {
    CHECK_THROWS_AS(sockopt::parallel_for(4, 0, [](int) {}), ConfigError);
  }
}

TEST_CASE("default policy sets carry the documented thresholds") {
  const auto ref = sockopt::default_reference_policies();
  REQUIRE(ref.size() == 5);
  CHECK(ref[0].kind == PolicyKind::kPurist);
  CHECK(ref[0].tau_eta == 0.0);
  CHECK(ref[1].kind == PolicyKind::kGreedy);
  CHECK(ref[2].kind == PolicyKind::kThresholdMix);
  CHECK(ref[2].tau_xi == 0.8);
  CHECK(ref[3].kind == PolicyKind::kOrphanRescue);
  CHECK(ref[3].tau_xi == 0.7);
  CHECK(ref[4].kind == PolicyKind::kExposureAware);

  const auto grid = sockopt::default_grid_policies();
  REQUIRE(grid.size() == 4);
  CHECK(grid[0].kind == PolicyKind::kPurist);
  for (const auto& p : grid) CHECK(p.kind != PolicyKind::kExposureAware);
}

TEST_CASE("the reference experiment aggregates per policy") {
  const Catalogue cat = test_catalogue();
  const SimConfig base = short_config();
  const auto policies = sockopt::default_reference_policies();
  const auto sets = sockopt::experiment_reference(cat, base, policies, 8, 3, 2);
  REQUIRE(sets.size() == policies.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    CHECK(sets[i].spec.kind == policies[i].kind);
    REQUIRE(sets[i].runs.size() == 8);
    for (const auto& run : sets[i].runs) {
      CHECK(run.money <= base.agent.budget);
    }
    CHECK(sets[i].agg.money.has_ci);
  }
  // Purist never wears a mismatched pair.
  for (const auto& run : sets[0].runs) CHECK(run.social == 0.0);

  SUBCASE("a single replication leaves the interval undefined") {
    const auto one = sockopt::experiment_reference(cat, base, policies, 1, 3, 1);
    CHECK_FALSE(one[0].agg.money.has_ci);
  }
  SUBCASE("results are independent of the job count") {
    const auto serial =
        sockopt::experiment_reference(cat, base, policies, 8, 3, 1);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t r = 0; r < sets[i].runs.size(); ++r) {
        CHECK(sets[i].runs[r].social == serial[i].runs[r].social);
        CHECK(sets[i].runs[r].money == serial[i].runs[r].money);
        CHECK(sets[i].runs[r].reward_total == serial[i].runs[r].reward_total);
      }
    }
  }
}

TEST_CASE("paired replications cut the variance of policy differences") {
  // With shared streams, policy-minus-baseline differences have much lower
  // variance than differences across mismatched replications.
  const Catalogue cat = test_catalogue(30, 9);
  SimConfig base = short_config();
  base.T = 90;
  std::vector<PolicySpec> two = {{PolicyKind::kPurist, 0.0, 0.7},
                                 {PolicyKind::kGreedy, 0.0, 0.7}};
  const auto sets = sockopt::experiment_reference(cat, base, two, 24, 41, 4);
  const auto& purist = sets[0].runs;
  const auto& greedy = sets[1].runs;
  auto variance = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    return s2 / static_cast<double>(v.size() - 1);
  };
  std::vector<double> paired;
  std::vector<double> crossed;
  const std::size_t n = purist.size();
  for (std::size_t r = 0; r < n; ++r) {
    paired.push_back(greedy[r].infeasible_days - purist[r].infeasible_days);
    crossed.push_back(greedy[r].infeasible_days -
                      purist[(r + 1) % n].infeasible_days);
  }
  CHECK(variance(paired) <= variance(crossed));
}

TEST_CASE("the stress grid emits one cell per combination") {
  const Catalogue cat = test_catalogue();
  SimConfig base = short_config();
  GridSpec grid;
  grid.d_values = {0.0, 0.1};
  grid.theta_values = {15, 30};
  grid.replications = 4;
  const auto policies = sockopt::default_grid_policies();
  const auto cells = sockopt::experiment_grid(cat, base, grid, policies, 7, 2);
  REQUIRE(cells.size() == 2 * 2 * policies.size());
  std::size_t idx = 0;
  for (int theta : grid.theta_values) {
    for (double d : grid.d_values) {
      for (const auto& p : policies) {
        CHECK(cells[idx].theta == theta);
        CHECK(cells[idx].d == d);
        CHECK(cells[idx].policy.kind == p.kind);
        CHECK(cells[idx].runs.size() == 4);
        ++idx;
      }
    }
  }
  SUBCASE("grid validation rejects empty axes") {
    GridSpec bad;
    bad.d_values.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = GridSpec{};
    bad.theta_values.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = GridSpec{};
    bad.replications = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = GridSpec{};
    bad.d_values[0] = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }
}

TEST_CASE("lossless cells see no stranded-by-loss capacity") {
  const Catalogue cat = test_catalogue();
  SimConfig base = short_config();
  GridSpec grid;
  grid.d_values = {0.0};
  grid.theta_values = {40};
  grid.replications = 3;
  const std::vector<PolicySpec> one = {{PolicyKind::kGreedy, 0.0, 0.7}};
  const auto cells = sockopt::experiment_grid(cat, base, grid, one, 7, 1);
  REQUIRE(cells.size() == 1);
  for (const auto& run : cells[0].runs) {
    CHECK(run.stranded_loss == 0.0);
    CHECK(run.infeasible_days == 0);
  }
}

TEST_CASE("the trade-off sweep books eco savings at alpha times money") {
  const Catalogue cat = test_catalogue();
  SimConfig base = short_config();
  const std::vector<double> taus = {1.0, 0.9, 0.8};
  const TradeOffResult res =
      sockopt::experiment_tradeoff(cat, base, taus, 6, 13, 2);
  REQUIRE(res.points.size() == 2 * taus.size());  // two tuned families
  REQUIRE(res.baseline.size() == 6);
  for (const auto& run : res.baseline) CHECK(run.social == 0.0);
  for (const auto& p : res.points) {
    CHECK((p.kind == PolicyKind::kThresholdMix ||
           p.kind == PolicyKind::kOrphanRescue));
    CHECK(p.d_eco ==
          doctest::Approx(cat.alpha() * p.d_money).epsilon(1e-12));
    CHECK(p.d_soc >= 0.0);  // the baseline is socially optimal
  }
  SUBCASE("an empty tolerance grid is rejected") {
    CHECK_THROWS_AS(sockopt::experiment_tradeoff(cat, base, {}, 6, 13, 1),
                    ConfigError);
    CHECK_THROWS_AS(sockopt::experiment_tradeoff(cat, base, taus, 0, 13, 1),
                    ConfigError);
  }
  SUBCASE("the default tolerance grid descends from 1.00 to 0.70") {
    const auto grid = sockopt::default_tau_xi_grid();
    REQUIRE(grid.size() == 7);
    CHECK(grid.front() == 1.0);
    CHECK(grid.back() == doctest::Approx(0.7));
    for (std::size_t i = 1; i < grid.size(); ++i) {
      CHECK(grid[i] == doctest::Approx(grid[i - 1] - 0.05));
    }
  }
}

TEST_CASE("knee detection picks the steepest marginal gain") {
  SUBCASE("two distinct points define a knee at the second") {
    const PointList pts = {{0.0, 0.0}, {1.0, 3.0}};
    const auto knee = sockopt::knee_point(pts);
    REQUIRE(knee.defined);
    CHECK(knee.index == 1);
  }
  SUBCASE("the steepest segment wins") {
    const PointList pts = {{1.0, 1.0}, {2.0, 3.0}, {3.0, 3.5}};
    const auto knee = sockopt::knee_point(pts);
    REQUIRE(knee.defined);
    CHECK(pts[knee.index].first == 2.0);
    CHECK(pts[knee.index].second == 3.0);
  }
  SUBCASE("order of the input does not matter") {
    const PointList pts = {{3.0, 3.5}, {1.0, 1.0}, {2.0, 3.0}};
    const auto knee = sockopt::knee_point(pts);
    REQUIRE(knee.defined);
    CHECK(pts[knee.index].first == 2.0);
  }
  SUBCASE("identical costs leave the knee undefined") {
    const PointList pts = {{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}};
    CHECK_FALSE(sockopt::knee_point(pts).defined);
    CHECK_FALSE(sockopt::knee_point(PointList{{1.0, 1.0}}).defined);
    CHECK_FALSE(sockopt::knee_point(PointList{}).defined);
  }
  SUBCASE("slope ties resolve to the smaller cost") {
    const PointList pts = {{0.0, 0.0}, {1.0, 2.0}, {2.0, 4.0}};
    const auto knee = sockopt::knee_point(pts);
    REQUIRE(knee.defined);
    CHECK(pts[knee.index].first == 1.0);
  }
}

TEST_CASE("the Pareto front keeps only undominated points") {
  SUBCASE("a single point is its own front") {
    const PointList pts = {{2.0, 1.0}};
    const auto front = sockopt::pareto_front(pts);
    REQUIRE(front.size() == 1);
    CHECK(front[0] == 0);
  }
  SUBCASE("a cheaper, better point dominates") {
    const PointList pts = {{1.0, 5.0}, {2.0, 4.0}};
    const auto front = sockopt::pareto_front(pts);
    REQUIRE(front.size() == 1);
    CHECK(front[0] == 0);
  }
  SUBCASE("incomparable points all survive, sorted by cost") {
    const PointList pts = {{3.0, 9.0}, {1.0, 4.0}, {2.0, 7.0}};
    const auto front = sockopt::pareto_front(pts);
    REQUIRE(front.size() == 3);
    CHECK(pts[front[0]].first == 1.0);
    CHECK(pts[front[1]].first == 2.0);
    CHECK(pts[front[2]].first == 3.0);
  }
  SUBCASE("random clouds match a brute-force dominance filter") {
    std::uint64_t state = 12345;
    auto next = [&state]() {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      return static_cast<double>((state >> 33) % 1000) / 100.0;
    };
    for (int trial = 0; trial < 30; ++trial) {
      PointList pts;
      for (int i = 0; i < 12; ++i) pts.push_back({next(), next()});
      const auto front = sockopt::pareto_front(pts);
      std::vector<std::size_t> want;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
          if (j == i) continue;
          const bool no_worse = pts[j].first <= pts[i].first &&
                                pts[j].second >= pts[i].second;
          const bool better = pts[j].first < pts[i].first ||
                              pts[j].second > pts[i].second;
          if (no_worse && better) dominated = true;
        }
        if (!dominated) want.push_back(i);
      }
      std::vector<std::size_t> got = front;
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      CHECK(got == want);
    }
  }
}

TEST_CASE("rank correlation handles monotone data and ties") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> up = {2.0, 9.0, 11.0, 30.0, 31.0};
  std::vector<double> down(up.rbegin(), up.rend());
  CHECK(sockopt::spearman_correlation(x, up) == doctest::Approx(1.0));
  CHECK(sockopt::spearman_correlation(x, down) == doctest::Approx(-1.0));
  const std::vector<double> tied = {1.0, 1.0, 2.0, 2.0, 3.0};
  const double r = sockopt::spearman_correlation(x, tied);
  CHECK(r > 0.9);
  CHECK(r <= 1.0);
  const std::vector<double> flat = {4.0, 4.0, 4.0, 4.0, 4.0};
  CHECK(sockopt::spearman_correlation(x, flat) == 0.0);
}

TEST_CASE("experiment CSV emitters produce the documented shapes") {
  const Catalogue cat = test_catalogue();
  const SimConfig base = short_config();
  const auto policies = sockopt::default_reference_policies();
  const auto sets = sockopt::experiment_reference(cat, base, policies, 3, 3, 1);

  const std::string ref_csv = sockopt::reference_to_csv(sets);
  CHECK(ref_csv.rfind("policy,n_socks,cost_money,cost_eco,cost_soc,"
                      "infeasible_days,stranded,n_socks_ci,cost_money_ci,"
                      "cost_eco_ci,cost_soc_ci,infeasible_days_ci,"
                      "stranded_ci\n",
                      0) == 0);
  CHECK(std::count(ref_csv.begin(), ref_csv.end(), '\n') ==
        static_cast<long>(sets.size()) + 1);
  CHECK(ref_csv.find("purist,") != std::string::npos);
  CHECK(ref_csv.find("exposure_aware,") != std::string::npos);

  const std::string reps_csv =
      sockopt::replications_to_csv("greedy", sets[1].runs);
  CHECK(reps_csv.rfind("policy,replication,", 0) == 0);
  CHECK(std::count(reps_csv.begin(), reps_csv.end(), '\n') == 4);

  GridSpec grid;
  grid.d_values = {0.0, 0.1};
  grid.theta_values = {20};
  grid.replications = 2;
  const auto cells = sockopt::experiment_grid(
      cat, base, grid, sockopt::default_grid_policies(), 7, 1);
  const std::string grid_csv = sockopt::grid_to_csv(cells);
  CHECK(grid_csv.rfind("theta,d,policy,", 0) == 0);
  CHECK(std::count(grid_csv.begin(), grid_csv.end(), '\n') ==
        static_cast<long>(cells.size()) + 1);
  const std::string series_csv = sockopt::grid_series_to_csv(cells);
  CHECK(series_csv.rfind("metric,theta,d,policy,mean\n", 0) == 0);
  // One row per cell for each reported series metric.
  const long series_rows =
      std::count(series_csv.begin(), series_csv.end(), '\n') - 1;
  CHECK(series_rows % static_cast<long>(cells.size()) == 0);
  CHECK(series_rows >= static_cast<long>(cells.size()));

  const std::vector<double> taus = {1.0, 0.85};
  const TradeOffResult trade =
      sockopt::experiment_tradeoff(cat, base, taus, 3, 13, 1);
  const std::string trade_csv = sockopt::tradeoff_to_csv(trade.points);
  CHECK(trade_csv.rfind("policy,tau_xi,d_soc,d_money,d_eco\n", 0) == 0);
  CHECK(std::count(trade_csv.begin(), trade_csv.end(), '\n') ==
        static_cast<long>(trade.points.size()) + 1);

  const std::string annotations = sockopt::tradeoff_annotations_json(trade);
  CHECK(annotations.find("threshold_mix") != std::string::npos);
  CHECK(annotations.find("orphan_rescue") != std::string::npos);
  CHECK(annotations.find("knee") != std::string::npos);
  CHECK(annotations.find("pareto") != std::string::npos);
}

}  // namespace
