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

#include "sockopt/environment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "sockopt/errors.hpp"
#include "sockopt/io.hpp"

namespace sockopt {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

// Insert keeping the vector sorted by instance id.
void insert_by_id(std::vector<SockInstance>* v, const SockInstance& s) {
  auto it = std::lower_bound(
      v->begin(), v->end(), s,
      [](const SockInstance& a, const SockInstance& b) { return a.id < b.id; });
  v->insert(it, s);
}

}  // namespace

void SimConfig::validate() const {
  require(T >= 1, "T must be >= 1");
  require(kappa >= 1, "kappa must be >= 1");
  require(theta >= 1, "theta must be >= 1");
  require(d >= 0.0 && d <= 1.0, "d must lie in [0, 1]");
  require(agent.budget >= 0.0, "budget must be >= 0");
  require(agent.chi >= 0.0, "chi must be >= 0");
  require(agent.delta >= 0.0 && agent.delta <= 1.0,
          "delta must lie in [0, 1]");
  require(agent.rho >= 0.0 && agent.rho <= 1.0, "rho must lie in [0, 1]");
  require(agent.gamma >= 1.0, "gamma must be >= 1");
  require(agent.lambda >= 0.0, "lambda must be >= 0");
  require(policy.tau_eta >= 0.0 && policy.tau_eta <= 1.0,
          "tau_eta must lie in [0, 1]");
  require(policy.tau_xi >= 0.0 && policy.tau_xi <= 1.0,
          "tau_xi must lie in [0, 1]");
}

double round_half_even(double x) {
  const double f = std::floor(x);
  const double frac = x - f;
  if (frac > 0.5) return f + 1.0;
  if (frac < 0.5) return f;
  return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

int active_subset_size(double delta, int n_designs) {
  require(n_designs >= 1, "catalogue must contain at least one design");
  require(delta >= 0.0 && delta <= 1.0, "delta must lie in [0, 1]");
  return 1 + static_cast<int>(round_half_even(delta * (n_designs - 1)));
}

WashOutcome wash_buffer(const std::vector<SockInstance>& buffer,
                        RngStream& wash_stream) {
  WashOutcome out;
  for (const SockInstance& s : buffer) {
    if (wash_stream.bernoulli(1.0 - s.d)) {
      out.returned.push_back(s);
    } else {
      out.lost.push_back(s);
    }
  }
  return out;
}

Simulation::Simulation(const Catalogue& catalogue, const SimConfig& config,
                       std::uint64_t seed, std::uint64_t replication)
    : catalogue_(&catalogue),
      config_(config),
      exposure_(seed, replication, "exposure"),
      wash_(seed, replication, "wash"),
      purchase_(seed, replication, "purchase"),
      remaining_budget_(config.agent.budget) {
  config_.validate();
  if (catalogue.size() == 0) throw DataError("catalogue is empty");
}

void Simulation::buy_sock(std::size_t design, DayRecord* rec) {
  const SockDesign& dsg = catalogue_->design(design);
  SockInstance s;
  s.id = next_id_++;
  s.design = static_cast<std::uint32_t>(design);
  s.tau = 0;
  s.theta = config_.theta;
  s.d = config_.d;
  available_.push_back(s);  // ids are issued in increasing order
  rec->purchases.push_back(
      {static_cast<std::uint32_t>(design), dsg.price, dsg.eco});
  metrics_.socks_purchased += 1;
  metrics_.money += dsg.price;
  metrics_.eco += dsg.eco;
  remaining_budget_ -= dsg.price;
}

DayRecord Simulation::initial_purchase() {
  if (purchased_) throw GuardError("initial purchase already performed");
  purchased_ = true;

  const int k =
      active_subset_size(config_.agent.delta, static_cast<int>(
                                                  catalogue_->size()));
  active_ = purchase_.sample_without_replacement(
      catalogue_->size(), static_cast<std::size_t>(k));
  std::sort(active_.begin(), active_.end());

  DayRecord rec;
  rec.day = 0;
  for (;;) {
    std::vector<std::size_t> affordable;
    for (std::size_t dsg : active_) {
      if (2.0 * catalogue_->design(dsg).price <= remaining_budget_) {
        affordable.push_back(dsg);
      }
    }
    if (affordable.empty()) break;
    const std::size_t pick =
        affordable[purchase_.uniform_below(affordable.size())];
    buy_sock(pick, &rec);
    buy_sock(pick, &rec);
  }
  reward_days_ += day_reward(rec, config_.agent);
  return rec;
}

void Simulation::run_wash(DayRecord* rec) {
  WashOutcome out = wash_buffer(laundry_, wash_);
  laundry_.clear();
  for (const SockInstance& s : out.returned) insert_by_id(&available_, s);
  for (const SockInstance& s : out.lost) {
    const double cap = static_cast<double>(s.theta - s.tau);
    metrics_.stranded_loss += cap;
    rec->lost_capacity += cap;
  }
  lost_ += static_cast<long long>(out.lost.size());
  rec->washed += static_cast<int>(out.returned.size() + out.lost.size());
  rec->lost += static_cast<int>(out.lost.size());
}

DayRecord Simulation::step_day() {
  if (!purchased_) throw GuardError("initial purchase has not been performed");
  ++day_;
  DayRecord rec;
  rec.day = day_;
  rec.exposed = exposure_.bernoulli(config_.agent.rho);

  if (config_.replenishment && !replenishment_exhausted_ &&
      available_.size() < 2) {
    // Cheapest pair overall: two copies of the cheapest design (any mixed
    // pair costs at least as much and a same-design pair has xi = 1).
    std::size_t best = 0;
    for (std::size_t i = 1; i < catalogue_->size(); ++i) {
      if (catalogue_->design(i).price < catalogue_->design(best).price) {
        best = i;
      }
    }
    if (2.0 * catalogue_->design(best).price <= remaining_budget_) {
      buy_sock(best, &rec);
      buy_sock(best, &rec);
    } else {
      replenishment_exhausted_ = true;
    }
  }

  // Out of wearable socks with laundry waiting: wash early rather than sit
  // in a state no policy can act on.
  if (available_.size() < 2 && !laundry_.empty()) run_wash(&rec);

  const EtaFn eta = [this](const SockInstance& a, const SockInstance& b) {
    return eta_of(a, b);
  };
  const PairChoice choice =
      select_pair(config_.policy, available_, eta, config_.agent);

  if (!choice.found) {
    rec.feasible = false;
    metrics_.infeasible_days += 1;
    return finish_day(std::move(rec));
  }

  rec.has_pair = true;
  rec.sock1 = available_[choice.a].id;
  rec.sock2 = available_[choice.b].id;
  rec.eta = choice.eta;
  rec.social_cost =
      social_cost(choice.eta, config_.agent.chi, rec.exposed,
                  config_.agent.gamma);
  metrics_.social += rec.social_cost;
  metrics_.total_wears += 2;

  // Remove the worn pair (higher index first), bump wear, and either retire
  // a sock that used up its capacity or queue it for laundry.
  SockInstance a = available_[choice.a];
  SockInstance b = available_[choice.b];
  available_.erase(available_.begin() + static_cast<std::ptrdiff_t>(choice.b));
  available_.erase(available_.begin() + static_cast<std::ptrdiff_t>(choice.a));
  for (SockInstance* s : {&a, &b}) {
    s->tau += 1;
    if (s->tau >= s->theta) {
      worn_out_ += 1;
    } else {
      insert_by_id(&laundry_, *s);
    }
  }

  if (static_cast<int>(laundry_.size()) >= config_.kappa) run_wash(&rec);
  return finish_day(std::move(rec));
}

DayRecord Simulation::finish_day(DayRecord rec) {
  reward_days_ += day_reward(rec, config_.agent);
  return rec;
}

SimResult Simulation::run(bool keep_trace) {
  SimResult result;
  DayRecord first = initial_purchase();
  const EtaFn eta = [this](const SockInstance& a, const SockInstance& b) {
    return eta_of(a, b);
  };
  result.diversity_start =
      diversity(available_, eta, config_.diversity_metric);
  if (keep_trace) result.days.push_back(std::move(first));
  for (int t = 1; t <= config_.T; ++t) {
    DayRecord rec = step_day();
    if (keep_trace) result.days.push_back(std::move(rec));
  }
  result.diversity_end = diversity(available_, eta, config_.diversity_metric);

  metrics_.stranded_terminal =
      terminal_stranded_capacity(available_, eta, config_.policy);
  metrics_.stranded = metrics_.stranded_loss + metrics_.stranded_terminal;
  metrics_.reward_total = reward_days_;
  if (config_.diversity_at_start) {
    metrics_.reward_total +=
        diversity_utility(config_.agent.delta, result.diversity_start);
  }
  if (config_.diversity_at_end) {
    metrics_.reward_total +=
        diversity_utility(config_.agent.delta, result.diversity_end);
  }

  result.metrics = metrics_;
  result.end_inventory = available_;
  result.end_laundry = laundry_;
  return result;
}

SimResult run_simulation(const Catalogue& catalogue, const SimConfig& config,
                         std::uint64_t seed, std::uint64_t replication,
                         bool keep_trace) {
  Simulation sim(catalogue, config, seed, replication);
  return sim.run(keep_trace);
}

std::string trace_to_csv(std::span<const DayRecord> days) {
  std::string out = "day,Z,feasible,sock1,sock2,eta,soc_cost,washed,lost\n";
  char buf[160];
  for (const DayRecord& r : days) {
    if (r.day == 0) continue;
    std::string s1 = r.has_pair ? std::to_string(r.sock1) : std::string();
    std::string s2 = r.has_pair ? std::to_string(r.sock2) : std::string();
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%s,%s,", r.day,
                  r.exposed ? 1 : 0, r.feasible ? 1 : 0, s1.c_str(),
                  s2.c_str());
    out += buf;
    out += fmt_full(r.eta);
    out += ',';
    out += fmt_full(r.social_cost);
    std::snprintf(buf, sizeof(buf), ",%d,%d\n", r.washed, r.lost);
    out += buf;
  }
  return out;
}

}  // namespace sockopt
