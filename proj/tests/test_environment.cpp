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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "sockopt/catalogue.hpp"
#include "sockopt/environment.hpp"
#include "sockopt/errors.hpp"
#include "sockopt/io.hpp"
#include "sockopt/metrics.hpp"
#include "sockopt/rng.hpp"

namespace {

using sockopt::Catalogue;
using sockopt::CatalogueSpec;
using sockopt::ConfigError;
using sockopt::DayRecord;
using sockopt::GuardError;
using sockopt::PolicyKind;
using sockopt::SimConfig;
using sockopt::SimResult;
using sockopt::Simulation;
using sockopt::SockInstance;

Catalogue small_catalogue(int n = 20, std::uint64_t seed = 3,
                          int price_min = 2, int price_max = 10) {
  CatalogueSpec spec;
  spec.n_designs = n;
  spec.feature_sizes = {4, 3, 3};
  spec.price_min = price_min;
  spec.price_max = price_max;
  return sockopt::generate_catalogue(spec, seed);
}

TEST_CASE("round_half_even rounds ties to the even neighbor") {
  CHECK(sockopt::round_half_even(0.5) == 0.0);
  CHECK(sockopt::round_half_even(1.5) == 2.0);
  CHECK(sockopt::round_half_even(2.5) == 2.0);
  CHECK(sockopt::round_half_even(-0.5) == 0.0);
  CHECK(sockopt::round_half_even(-1.5) == -2.0);
  CHECK(sockopt::round_half_even(2.3) == 2.0);
  CHECK(sockopt::round_half_even(2.7) == 3.0);
  CHECK(sockopt::round_half_even(623.5) == 624.0);
}

TEST_CASE("active subset size across the delta range") {
  CHECK(sockopt::active_subset_size(0.0, 1248) == 1);
  CHECK(sockopt::active_subset_size(1.0, 1248) == 1248);
  CHECK(sockopt::active_subset_size(0.5, 1248) == 625);
  CHECK(sockopt::active_subset_size(0.5, 1) == 1);
}

TEST_CASE("wash corner probabilities are exact") {
  std::vector<SockInstance> buffer;
  for (int i = 0; i < 50; ++i) {
    SockInstance s;
    s.id = static_cast<std::uint32_t>(i);
    s.theta = 10;
    buffer.push_back(s);
  }
  SUBCASE("d = 0 returns everything") {
    for (auto& s : buffer) s.d = 0.0;
    sockopt::RngStream wash(1, 0, "wash");
    const auto out = sockopt::wash_buffer(buffer, wash);
    CHECK(out.returned.size() == 50);
    CHECK(out.lost.empty());
  }
  SUBCASE("d = 1 loses everything") {
    for (auto& s : buffer) s.d = 1.0;
    sockopt::RngStream wash(1, 0, "wash");
    const auto out = sockopt::wash_buffer(buffer, wash);
    CHECK(out.returned.empty());
    CHECK(out.lost.size() == 50);
  }
}

TEST_CASE("wash conserves socks and loses a binomial-consistent fraction") {
  std::vector<SockInstance> buffer;
  for (int i = 0; i < 10000; ++i) {
    SockInstance s;
    s.id = static_cast<std::uint32_t>(i);
    s.d = 0.02;
    buffer.push_back(s);
  }
  sockopt::RngStream wash(123, 0, "wash");
  const auto out = sockopt::wash_buffer(buffer, wash);
  CHECK(out.returned.size() + out.lost.size() == 10000);
  // 3 binomial standard deviations around the mean: 200 +- 42.
  CHECK(out.lost.size() >= 158);
  CHECK(out.lost.size() <= 242);

  std::vector<std::uint32_t> ids;
  for (const auto& s : out.returned) ids.push_back(s.id);
  for (const auto& s : out.lost) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i)
    REQUIRE(ids[i] == static_cast<std::uint32_t>(i));
}

TEST_CASE("initial purchase with zero budget buys nothing") {
  const Catalogue cat = small_catalogue();
  SimConfig cfg;
  cfg.agent.budget = 0.0;
  Simulation sim(cat, cfg, 1, 0);
  const DayRecord rec = sim.initial_purchase();
  CHECK(rec.purchases.empty());
  CHECK(sim.available().empty());
  CHECK(sim.metrics().money == 0.0);
}

TEST_CASE("single-design purchase fills the budget exactly") {
  // delta = 0 concentrates on one active design; with every price 5 and
  // b = 200 the loop buys exactly 40 socks.
  const Catalogue cat = small_catalogue(20, 3, 5, 5);
  SimConfig cfg;
  cfg.agent.budget = 200.0;
  cfg.agent.delta = 0.0;
  Simulation sim(cat, cfg, 1, 0);
  sim.initial_purchase();
  CHECK(sim.available().size() == 40);
  CHECK(sim.metrics().money == 200.0);
  const std::uint32_t d0 = sim.available()[0].design;
  for (const auto& s : sim.available()) {
    CHECK(s.design == d0);
    CHECK(s.tau == 0);
  }
}

TEST_CASE("initial purchase buys pairs and stays within budget") {
  const Catalogue cat = small_catalogue();
  SimConfig cfg;
  Simulation sim(cat, cfg, 9, 2);
  sim.initial_purchase();
  CHECK(sim.available().size() % 2 == 0);
  CHECK(sim.metrics().money <= cfg.agent.budget);
  CHECK(sim.remaining_budget() >= 0.0);
  CHECK_THROWS_AS(sim.initial_purchase(), GuardError);
}

TEST_CASE("step before purchase is refused") {
  const Catalogue cat = small_catalogue();
  SimConfig cfg;
  Simulation sim(cat, cfg, 1, 0);
  CHECK_THROWS_AS(sim.step_day(), GuardError);
}

TEST_CASE("two identical socks are worn and queued for laundry") {
  const Catalogue cat = small_catalogue(1, 3, 5, 5);
  SimConfig cfg;
  cfg.agent.budget = 10.0;  // one pair of the single design
  cfg.agent.delta = 0.0;
  cfg.policy.kind = PolicyKind::kPurist;
  cfg.policy.tau_eta = 0.0;
  cfg.kappa = 14;
  Simulation sim(cat, cfg, 1, 0);
  sim.initial_purchase();
  REQUIRE(sim.available().size() == 2);
  const DayRecord rec = sim.step_day();
  CHECK(rec.feasible);
  CHECK(rec.eta == 0.0);
  CHECK(sim.available().empty());
  REQUIRE(sim.laundry().size() == 2);
  CHECK(sim.laundry()[0].tau == 1);
  CHECK(sim.laundry()[1].tau == 1);
}

TEST_CASE("empty inventory with replenishment off is an infeasible day") {
  const Catalogue cat = small_catalogue();
  SimConfig cfg;
  cfg.agent.budget = 0.0;
  cfg.replenishment = false;
  Simulation sim(cat, cfg, 1, 0);
  sim.initial_purchase();
  const DayRecord rec = sim.step_day();
  CHECK_FALSE(rec.feasible);
  CHECK(rec.purchases.empty());
  CHECK(rec.washed == 0);
  CHECK(sim.day() == 1);
  CHECK(sim.metrics().infeasible_days == 1);
  CHECK(sim.metrics().total_wears == 0);
}

TEST_CASE("a full laundry buffer washes the same day and returns intact") {
  const Catalogue cat = small_catalogue(1, 3, 5, 5);
  SimConfig cfg;
  cfg.agent.budget = 10.0;
  cfg.agent.delta = 0.0;
  cfg.kappa = 2;
  cfg.d = 0.0;
  Simulation sim(cat, cfg, 1, 0);
  sim.initial_purchase();
  const DayRecord d1 = sim.step_day();
  CHECK(d1.feasible);
  CHECK(d1.washed == 2);
  CHECK(d1.lost == 0);
  CHECK(sim.available().size() == 2);  // both returned, wearable tomorrow
  const DayRecord d2 = sim.step_day();
  CHECK(d2.feasible);
  CHECK(sim.available()[0].tau == 2);
}

TEST_CASE("socks retire after exactly theta wears") {
  const Catalogue cat = small_catalogue(1, 3, 5, 5);
  SimConfig cfg;
  cfg.agent.budget = 10.0;
  cfg.agent.delta = 0.0;
  cfg.theta = 3;
  cfg.kappa = 2;
  cfg.d = 0.0;
  cfg.replenishment = false;
  Simulation sim(cat, cfg, 1, 0);
  sim.initial_purchase();
  for (int t = 0; t < 3; ++t) {
    const DayRecord rec = sim.step_day();
    CHECK(rec.feasible);
  }
  // Third wear reaches theta: both socks retire instead of entering laundry.
  CHECK(sim.worn_out_count() == 2);
  CHECK(sim.available().empty());
  CHECK(sim.laundry().empty());
  CHECK_FALSE(sim.step_day().feasible);
  CHECK(sim.metrics().total_wears == 6);
}

TEST_CASE("starved inventory washes the pending buffer early") {
  const Catalogue cat = small_catalogue(1, 3, 5, 5);
  SimConfig cfg;
  cfg.agent.budget = 10.0;
  cfg.agent.delta = 0.0;
  cfg.kappa = 14;  // never reached by two socks
  cfg.d = 0.0;
  cfg.replenishment = false;
  Simulation sim(cat, cfg, 1, 0);
  sim.initial_purchase();
  const DayRecord d1 = sim.step_day();
  CHECK(d1.feasible);
  CHECK(d1.washed == 0);  // buffer holds 2 < kappa
  REQUIRE(sim.laundry().size() == 2);
  // Next day the agent is out of socks; the buffer is washed on the spot.
  const DayRecord d2 = sim.step_day();
  CHECK(d2.washed == 2);
  CHECK(d2.feasible);
  CHECK(sim.metrics().infeasible_days == 0);
}

TEST_CASE("conservation and budget hold on every step of random runs") {
  const Catalogue cat = small_catalogue(30, 11);
  for (std::uint64_t rep = 0; rep < 4; ++rep) {
    SimConfig cfg;
    cfg.T = 120;
    cfg.theta = 12;
    cfg.d = 0.1;
    cfg.policy.kind =
        rep % 2 == 0 ? PolicyKind::kGreedy : PolicyKind::kOrphanRescue;
    Simulation sim(cat, cfg, 77, rep);
    sim.initial_purchase();
    for (int t = 1; t <= cfg.T; ++t) {
      sim.step_day();
      const long long held =
          static_cast<long long>(sim.available().size()) +
          static_cast<long long>(sim.laundry().size());
      CHECK(sim.metrics().socks_purchased ==
            held + sim.worn_out_count() + sim.lost_count());
      CHECK(sim.metrics().money <= cfg.agent.budget);
    }
  }
}

TEST_CASE("runs are deterministic and replications differ") {
  const Catalogue cat = small_catalogue();
  SimConfig cfg;
  cfg.T = 90;
  const SimResult a = sockopt::run_simulation(cat, cfg, 5, 0);
  const SimResult b = sockopt::run_simulation(cat, cfg, 5, 0);
  const SimResult c = sockopt::run_simulation(cat, cfg, 5, 1);
  CHECK(a.metrics.money == b.metrics.money);
  CHECK(a.metrics.social == b.metrics.social);
  CHECK(a.metrics.reward_total == b.metrics.reward_total);
  CHECK(a.metrics.stranded == b.metrics.stranded);
  const bool differs = a.metrics.social != c.metrics.social ||
                       a.metrics.money != c.metrics.money ||
                       a.metrics.stranded != c.metrics.stranded;
  CHECK(differs);
}

TEST_CASE("purist runs accumulate exactly zero social cost") {
  const Catalogue cat = small_catalogue(40, 21);
  SimConfig cfg;
  cfg.T = 200;
  cfg.policy.kind = PolicyKind::kPurist;
  cfg.policy.tau_eta = 0.0;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const SimResult r = sockopt::run_simulation(cat, cfg, 13, rep);
    CHECK(r.metrics.social == 0.0);
  }
}

TEST_CASE("one-day run wears one pair") {
  const Catalogue cat = small_catalogue(1, 3, 5, 5);
  SimConfig cfg;
  cfg.T = 1;
  cfg.agent.budget = 10.0;
  cfg.agent.delta = 0.0;
  const SimResult r = sockopt::run_simulation(cat, cfg, 1, 0);
  CHECK(r.metrics.total_wears == 2);
  CHECK(r.metrics.infeasible_days == 0);
}

TEST_CASE("invalid configurations are rejected") {
  SimConfig cfg;
  cfg.T = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.kappa = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.d = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.agent.rho = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.agent.gamma = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("trace covers days 1..T and reconciles with the metrics") {
  const Catalogue cat = small_catalogue(30, 11);
  SimConfig cfg;
  cfg.T = 150;
  cfg.d = 0.05;
  cfg.theta = 20;
  const SimResult r = sockopt::run_simulation(cat, cfg, 31, 2, true);
  REQUIRE(r.days.size() == static_cast<std::size_t>(cfg.T) + 1);
  CHECK(r.days[0].day == 0);
  double social = 0.0;
  long long infeasible = 0;
  int lost = 0;
  double lost_capacity = 0.0;
  for (std::size_t i = 1; i < r.days.size(); ++i) {
    const DayRecord& d = r.days[i];
    CHECK(d.day == static_cast<int>(i));
    social += d.social_cost;
    infeasible += d.feasible ? 0 : 1;
    lost += d.lost;
    lost_capacity += d.lost_capacity;
  }
  CHECK(social == doctest::Approx(r.metrics.social).epsilon(1e-12));
  CHECK(infeasible == r.metrics.infeasible_days);
  CHECK(lost_capacity == doctest::Approx(r.metrics.stranded_loss));

  const std::string csv = sockopt::trace_to_csv(r.days);
  // Header plus one row per day 1..T; day 0 is the purchase record.
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(cfg.T) + 1);
  CHECK(csv.rfind("day,Z,feasible,sock1,sock2,eta,soc_cost,washed,lost\n",
                  0) == 0);
}

TEST_CASE("diversity utility enters the reward at the configured times") {
  const Catalogue cat = small_catalogue(30, 11);
  SimConfig base;
  base.T = 40;
  base.diversity_at_start = false;
  base.diversity_at_end = false;
  const SimResult none = sockopt::run_simulation(cat, base, 3, 0);

  SimConfig at_start = base;
  at_start.diversity_at_start = true;
  const SimResult start = sockopt::run_simulation(cat, at_start, 3, 0);
  CHECK(start.metrics.reward_total ==
        doctest::Approx(none.metrics.reward_total +
                        sockopt::diversity_utility(base.agent.delta,
                                                   start.diversity_start)));

  SimConfig both = at_start;
  both.diversity_at_end = true;
  const SimResult full = sockopt::run_simulation(cat, both, 3, 0);
  CHECK(full.metrics.reward_total ==
        doctest::Approx(start.metrics.reward_total +
                        sockopt::diversity_utility(base.agent.delta,
                                                   full.diversity_end)));
}

TEST_CASE("replenishment buys the cheapest pair when starved") {
  // Catalogue with one cheap and one expensive design; budget for exactly
  // one expensive pair up front.
  std::vector<sockopt::SockDesign> designs;
  designs.push_back({"d0", {0, 0}, 2, 2.0});
  designs.push_back({"d1", {1, 1}, 9, 9.0});
  const Catalogue cat({2, 2}, 1.0, designs);
  SimConfig cfg;
  cfg.agent.budget = 22.0;
  cfg.agent.delta = 1.0;  // both designs active
  cfg.theta = 1;          // socks retire after a single wear
  cfg.kappa = 4;
  cfg.replenishment = true;
  Simulation sim(cat, cfg, 6, 0);
  sim.initial_purchase();
  const double spent0 = sim.metrics().money;
  CHECK(spent0 <= 22.0);
  // Wear out the initial pairs, then watch replenishment kick in with the
  // cheapest design until the budget is exhausted for good.
  long long replenished = 0;
  for (int t = 1; t <= 30; ++t) {
    const DayRecord rec = sim.step_day();
    for (const auto& p : rec.purchases) {
      CHECK(p.price == 2);  // always the cheapest design
      ++replenished;
    }
  }
  CHECK(sim.metrics().money <= cfg.agent.budget);
  if (replenished > 0) CHECK(sim.metrics().money > spent0);
}

}  // namespace
