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

#include "sockopt/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "sockopt/errors.hpp"

namespace sockopt {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad_data(const std::string& msg) { throw DataError(msg); }

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (d <= 0 || n < 0) bad_data("rational must be nonnegative with den > 0");
  const long long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

Rational Rational::operator+(const Rational& o) const {
  const __int128 n =
      static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
  const __int128 d = static_cast<__int128>(den) * o.den;
  const __int128 limit = static_cast<__int128>(1) << 62;
  if (n >= limit || d >= limit) bad_data("rational overflow");
  Rational r;
  r.num = static_cast<long long>(n);
  r.den = static_cast<long long>(d);
  const long long g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  if (r.num == 0) r.den = 1;
  return r;
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num) * o.den <
         static_cast<__int128>(o.num) * den;
}

std::string Rational::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

void SockPlanInstance::validate() const {
  const std::size_t n = prices.size();
  if (theta.size() != n || xi.size() != n) {
    bad_data("planning instance field lengths disagree");
  }
  if (T < 1) bad_data("planning instance needs T >= 1");
  if (kappa < 1) bad_data("planning instance needs kappa >= 1");
  if (budget < 0) bad_data("planning instance budget must be >= 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (prices[i] < 0) bad_data("sock prices must be >= 0");
    if (theta[i] < 1) bad_data("sock wear capacity must be >= 1");
    if (xi[i].size() != n) bad_data("compatibility table is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!(xi[i][j] == xi[j][i])) bad_data("compatibility must be symmetric");
      if (xi[i][j].num > xi[i][j].den) {
        bad_data("compatibility values must lie in [0, 1]");
      }
    }
  }
}

void KnapsackInstance::validate() const {
  if (weights.size() != values.size()) {
    bad_data("knapsack weights/values lengths disagree");
  }
  for (long long w : weights) {
    if (w < 0) bad_data("knapsack weights must be >= 0");
  }
  for (long long v : values) {
    if (v < 0) bad_data("knapsack values must be >= 0");
  }
  if (capacity < 0) bad_data("knapsack capacity must be >= 0");
}

void CoverageInstance::validate() const {
  if (sets.size() != costs.size()) {
    bad_data("coverage sets/costs lengths disagree");
  }
  for (double w : weights) {
    if (w < 0) bad_data("coverage weights must be >= 0");
  }
  for (long long c : costs) {
    if (c < 1) bad_data("coverage costs must be >= 1");
  }
  for (const auto& s : sets) {
    for (int e : s) {
      if (e < 0 || static_cast<std::size_t>(e) >= weights.size()) {
        bad_data("coverage set references an unknown element");
      }
    }
  }
  if (budget < 0) bad_data("coverage budget must be >= 0");
}

namespace {

// --- brute-force planning -------------------------------------------------

// Socks are interchangeable when they cost the same, last the same, and
// their compatibility rows agree everywhere outside the pair.
bool interchangeable(const SockPlanInstance& inst, std::size_t i,
                     std::size_t j) {
  if (inst.prices[i] != inst.prices[j] || inst.theta[i] != inst.theta[j]) {
    return false;
  }
  for (std::size_t k = 0; k < inst.size(); ++k) {
    if (k == i || k == j) continue;
    if (!(inst.xi[i][k] == inst.xi[j][k])) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> compute_classes(
    const SockPlanInstance& inst) {
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    bool placed = false;
    for (auto& cls : classes) {
      if (interchangeable(inst, i, cls.front())) {
        cls.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({i});
  }
  return classes;
}

// Inventory slot: count socks of one class with a given remaining-use count
// sitting either in the wearable inventory or in the laundry buffer.
struct Slot {
  std::uint8_t cls = 0;
  std::uint8_t uses = 0;  // remaining wears, >= 1
  std::uint8_t in_laundry = 0;
  std::uint8_t count = 0;

  bool operator<(const Slot& o) const {
    if (cls != o.cls) return cls < o.cls;
    if (uses != o.uses) return uses < o.uses;
    return in_laundry < o.in_laundry;
  }
};

using State = std::vector<Slot>;

void add_slot(State* st, std::uint8_t cls, std::uint8_t uses,
              std::uint8_t in_laundry, std::uint8_t count) {
  if (count == 0 || uses == 0) return;
  for (Slot& s : *st) {
    if (s.cls == cls && s.uses == uses && s.in_laundry == in_laundry) {
      s.count = static_cast<std::uint8_t>(s.count + count);
      return;
    }
  }
  st->push_back({cls, uses, in_laundry, count});
}

State canonical(State st) {
  std::sort(st.begin(), st.end());
  State merged;
  for (const Slot& s : st) {
    if (!merged.empty() && merged.back().cls == s.cls &&
        merged.back().uses == s.uses &&
        merged.back().in_laundry == s.in_laundry) {
      merged.back().count = static_cast<std::uint8_t>(merged.back().count +
                                                      s.count);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

std::string encode(const State& st, int days_left) {
  std::string key;
  key.reserve(st.size() * 4 + 1);
  key.push_back(static_cast<char>(days_left));
  for (const Slot& s : st) {
    key.push_back(static_cast<char>(s.cls));
    key.push_back(static_cast<char>(s.uses));
    key.push_back(static_cast<char>(s.in_laundry));
    key.push_back(static_cast<char>(s.count));
  }
  return key;
}

struct PlanSolver {
  const SockPlanInstance* inst;
  int n_classes = 0;
  std::vector<long long> cls_price;
  std::vector<int> cls_theta;
  std::vector<int> cls_avail;
  // Class-level compatibility; diagonal holds the intra-class pair value.
  std::vector<std::vector<Rational>> cxi;
  std::unordered_map<std::string, Rational> memo;

  explicit PlanSolver(const SockPlanInstance& instance,
                      const std::vector<std::vector<std::size_t>>& classes)
      : inst(&instance) {
    n_classes = static_cast<int>(classes.size());
    cls_price.resize(n_classes);
    cls_theta.resize(n_classes);
    cls_avail.resize(n_classes);
    cxi.assign(n_classes, std::vector<Rational>(n_classes, Rational(0, 1)));
    for (int c = 0; c < n_classes; ++c) {
      const std::size_t rep = classes[c].front();
      cls_price[c] = inst->prices[rep];
      cls_theta[c] = inst->theta[rep];
      cls_avail[c] = static_cast<int>(classes[c].size());
    }
    for (int a = 0; a < n_classes; ++a) {
      const std::size_t ra = classes[a].front();
      for (int b = 0; b < n_classes; ++b) {
        if (a == b) {
          if (classes[a].size() >= 2) cxi[a][a] = inst->xi[ra][classes[a][1]];
        } else {
          cxi[a][b] = inst->xi[ra][classes[b].front()];
        }
      }
    }
  }

  // Wear one sock from slot i of st (already decremented externally):
  // returns it to the state with one less use, in the laundry.
  State after_wear(const State& st, std::size_t i, std::size_t j) const {
    State next;
    next.reserve(st.size() + 2);
    for (std::size_t k = 0; k < st.size(); ++k) {
      Slot s = st[k];
      std::uint8_t worn = 0;
      if (k == i) ++worn;
      if (k == j) ++worn;
      if (worn > 0) {
        s.count = static_cast<std::uint8_t>(s.count - worn);
        add_slot(&next, s.cls, static_cast<std::uint8_t>(st[k].uses - 1), 1,
                 worn);
      }
      if (s.count > 0) next.push_back(s);
    }
    int in_laundry = 0;
    for (const Slot& s : next) {
      if (s.in_laundry) in_laundry += s.count;
    }
    if (in_laundry >= inst->kappa) {
      State washed;
      for (const Slot& s : next) {
        add_slot(&washed, s.cls, s.uses, 0, s.count);
      }
      next = std::move(washed);
    }
    return canonical(std::move(next));
  }

  Rational solve(const State& st, int days_left) {
    if (days_left == 0) return Rational(0, 1);
    const std::string key = encode(st, days_left);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    Rational best = solve(st, days_left - 1);  // idle day
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (st[i].in_laundry) continue;
      for (std::size_t j = i; j < st.size(); ++j) {
        if (st[j].in_laundry) continue;
        if (i == j && st[i].count < 2) continue;
        const Rational gain = cxi[st[i].cls][st[j].cls];
        const Rational cand = gain + solve(after_wear(st, i, j), days_left - 1);
        if (best < cand) best = cand;
      }
    }
    memo.emplace(std::move(key), best);
    return best;
  }

  State initial_state(const std::vector<int>& bought) const {
    State st;
    for (int c = 0; c < n_classes; ++c) {
      add_slot(&st, static_cast<std::uint8_t>(c),
               static_cast<std::uint8_t>(cls_theta[c]), 0,
               static_cast<std::uint8_t>(bought[c]));
    }
    return canonical(std::move(st));
  }

  // Enumerates purchase profiles that are affordable and inclusion-maximal
  // (skipping an affordable sock can never help: unworn socks are inert).
  void enumerate_purchases(std::vector<int>* bought, int c, long long spent,
                           const std::function<void(const std::vector<int>&)>&
                               visit) const {
    if (c == n_classes) {
      for (int k = 0; k < n_classes; ++k) {
        if ((*bought)[k] < cls_avail[k] && spent + cls_price[k] <= inst->budget)
          return;  // not maximal
      }
      visit(*bought);
      return;
    }
    for (int k = cls_avail[c]; k >= 0; --k) {
      const long long cost = spent + cls_price[c] * k;
      if (cost > inst->budget) continue;
      (*bought)[c] = k;
      enumerate_purchases(bought, c + 1, cost, visit);
    }
    (*bought)[c] = 0;
  }

  std::vector<OracleDay> recover_schedule(const State& start, int days) {
    std::vector<OracleDay> schedule;
    State st = start;
    for (int left = days; left >= 1; --left) {
      const Rational want = solve(st, left);
      OracleDay day;
      bool found = false;
      for (std::size_t i = 0; i < st.size() && !found; ++i) {
        if (st[i].in_laundry) continue;
        for (std::size_t j = i; j < st.size() && !found; ++j) {
          if (st[j].in_laundry) continue;
          if (i == j && st[i].count < 2) continue;
          const Rational gain = cxi[st[i].cls][st[j].cls];
          State next = after_wear(st, i, j);
          if (gain + solve(next, left - 1) == want) {
            day.wear = true;
            day.class_a = st[i].cls;
            day.class_b = st[j].cls;
            day.gain = gain;
            st = std::move(next);
            found = true;
          }
        }
      }
      // No pair attains the optimum: the optimal move is to idle.
      schedule.push_back(day);
    }
    return schedule;
  }
};

}  // namespace

SockPlanResult brute_force_sockplan(const SockPlanInstance& inst) {
  inst.validate();
  if (inst.T > 6) throw GuardError("planning oracle limited to T <= 6");
  if (inst.size() > 32) {
    throw GuardError("planning oracle limited to 32 socks");
  }
  const auto classes = compute_classes(inst);
  if (inst.size() > 12 && classes.size() > 12) {
    throw GuardError(
        "planning oracle limited to 12 socks or 12 interchangeability "
        "classes");
  }

  PlanSolver solver(inst, classes);
  SockPlanResult result;
  result.classes = classes;
  result.best = Rational(0, 1);
  result.purchased.assign(classes.size(), 0);

  std::vector<int> bought(classes.size(), 0);
  bool any = false;
  solver.enumerate_purchases(
      &bought, 0, 0, [&](const std::vector<int>& profile) {
        const Rational value =
            solver.solve(solver.initial_state(profile), inst.T);
        if (!any || result.best < value) {
          result.best = value;
          result.purchased = profile;
          any = true;
        }
      });
  result.schedule =
      solver.recover_schedule(solver.initial_state(result.purchased), inst.T);
  return result;
}

SockPlanInstance knapsack_to_sockplan(const KnapsackInstance& k) {
  k.validate();
  const std::size_t n = k.size();
  const long long scale = static_cast<long long>(n) + 1;
  long long v_tot = 0;
  for (long long v : k.values) v_tot += v;

  SockPlanInstance inst;
  inst.T = static_cast<int>(n);
  if (inst.T < 1) inst.T = 1;  // empty item set still needs a valid horizon
  inst.kappa = 2 * inst.T + 1;
  inst.budget = 2 * scale * k.capacity + 2 * static_cast<long long>(n);
  const std::size_t total = 4 * n;
  inst.prices.assign(total, 1);
  inst.theta.assign(total, 1);
  inst.xi.assign(total, std::vector<Rational>(total, Rational(0, 1)));
  for (std::size_t i = 0; i < n; ++i) {
    inst.prices[2 * i] = scale * k.weights[i];
    inst.prices[2 * i + 1] = scale * k.weights[i];
    if (v_tot > 0) {
      const Rational v(k.values[i], v_tot);
      inst.xi[2 * i][2 * i + 1] = v;
      inst.xi[2 * i + 1][2 * i] = v;
    }
  }
  if (v_tot > 0) {
    inst.threshold_k = Rational(std::max(0LL, k.target), v_tot);
    inst.k_defined = true;
    inst.degenerate = false;
  } else {
    // All compatibilities vanish; keep the target for the decision check.
    inst.threshold_k = Rational(std::max(0LL, k.target), 1);
    inst.k_defined = false;
    inst.degenerate = true;
  }
  return inst;
}

long long solve_knapsack_exact(const KnapsackInstance& k) {
  k.validate();
  if (k.size() > 20) throw GuardError("knapsack oracle limited to 20 items");
  if (k.capacity > 1000000) {
    throw GuardError("knapsack oracle limited to capacity 1e6");
  }
  std::vector<long long> dp(static_cast<std::size_t>(k.capacity) + 1, 0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const long long w = k.weights[i];
    for (long long c = k.capacity; c >= w; --c) {
      dp[static_cast<std::size_t>(c)] =
          std::max(dp[static_cast<std::size_t>(c)],
                   dp[static_cast<std::size_t>(c - w)] + k.values[i]);
    }
  }
  return dp[static_cast<std::size_t>(k.capacity)];
}

bool verify_reduction(const KnapsackInstance& k) {
  const bool knapsack_yes = solve_knapsack_exact(k) >= k.target;
  const SockPlanInstance inst = knapsack_to_sockplan(k);
  const SockPlanResult res = brute_force_sockplan(inst);
  const bool plan_yes = inst.threshold_k <= res.best;
  return knapsack_yes == plan_yes;
}

double coverage_value(const CoverageInstance& inst,
                      std::span<const std::size_t> selection) {
  std::vector<char> covered(inst.weights.size(), 0);
  for (std::size_t s : selection) {
    if (s >= inst.sets.size()) bad_data("selection references an unknown set");
    for (int e : inst.sets[s]) covered[static_cast<std::size_t>(e)] = 1;
  }
  double value = 0.0;
  for (std::size_t e = 0; e < covered.size(); ++e) {
    if (covered[e]) value += inst.weights[e];
  }
  return value;
}

CoverageResult sock_design_greedy(const CoverageInstance& inst) {
  inst.validate();
  const std::size_t n = inst.sets.size();
  std::vector<char> picked(n, 0);
  std::vector<char> covered(inst.weights.size(), 0);
  std::vector<std::size_t> selection;
  long long remaining = inst.budget;

  for (;;) {
    double best_ratio = 0.0;
    std::size_t best = n;
    for (std::size_t s = 0; s < n; ++s) {
      if (picked[s] || inst.costs[s] > remaining) continue;
      double marginal = 0.0;
      for (int e : inst.sets[s]) {
        if (!covered[static_cast<std::size_t>(e)]) {
          marginal += inst.weights[static_cast<std::size_t>(e)];
        }
      }
      const double ratio = marginal / static_cast<double>(inst.costs[s]);
      if (marginal > 0.0 && (best == n || ratio > best_ratio)) {
        best_ratio = ratio;
        best = s;
      }
    }
    if (best == n) break;
    picked[best] = 1;
    remaining -= inst.costs[best];
    selection.push_back(best);
    for (int e : inst.sets[best]) covered[static_cast<std::size_t>(e)] = 1;
  }
  std::sort(selection.begin(), selection.end());
  CoverageResult greedy{selection, coverage_value(inst, selection)};

  CoverageResult single;
  for (std::size_t s = 0; s < n; ++s) {
    if (inst.costs[s] > inst.budget) continue;
    const std::size_t sel[] = {s};
    const double v = coverage_value(inst, sel);
    if (single.selection.empty() || v > single.value) {
      single.selection = {s};
      single.value = v;
    }
  }
  return single.value > greedy.value ? single : greedy;
}

CoverageResult coverage_brute_force(const CoverageInstance& inst) {
  inst.validate();
  const std::size_t n = inst.sets.size();
  if (n > 20) throw GuardError("coverage oracle limited to 20 sets");
  CoverageResult best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    long long cost = 0;
    std::vector<std::size_t> sel;
    for (std::size_t s = 0; s < n; ++s) {
      if (mask & (1u << s)) {
        cost += inst.costs[s];
        sel.push_back(s);
      }
    }
    if (cost > inst.budget) continue;
    const double v = coverage_value(inst, sel);
    if (v > best.value || mask == 0) {
      best.value = v;
      best.selection = sel;
    }
  }
  return best;
}

Rational policy_total_xi(const SockPlanInstance& inst, const PolicySpec& spec,
                         const AgentParams& agent) {
  inst.validate();
  long long total_price = 0;
  for (long long p : inst.prices) total_price += p;
  if (total_price > inst.budget) {
    throw GuardError(
        "policy harness buys every listed sock; total price exceeds the "
        "budget");
  }

  std::vector<SockInstance> avail;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    SockInstance s;
    s.id = static_cast<std::uint32_t>(i);
    s.design = static_cast<std::uint32_t>(i);
    s.tau = 0;
    s.theta = inst.theta[i];
    s.d = 0.0;
    avail.push_back(s);
  }
  std::vector<SockInstance> laundry;
  const EtaFn eta = [&inst](const SockInstance& a, const SockInstance& b) {
    return 1.0 - inst.xi[a.design][b.design].to_double();
  };

  Rational total(0, 1);
  for (int t = 0; t < inst.T; ++t) {
    const PairChoice choice = select_pair(spec, avail, eta, agent);
    if (!choice.found) continue;
    SockInstance a = avail[choice.a];
    SockInstance b = avail[choice.b];
    total = total + inst.xi[a.design][b.design];
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(choice.b));
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(choice.a));
    for (SockInstance* s : {&a, &b}) {
      s->tau += 1;
      if (s->tau < s->theta) laundry.push_back(*s);
    }
    if (static_cast<int>(laundry.size()) >= inst.kappa) {
      for (const SockInstance& s : laundry) avail.push_back(s);
      laundry.clear();
      std::sort(avail.begin(), avail.end(),
                [](const SockInstance& x, const SockInstance& y) {
                  return x.id < y.id;
                });
    }
  }
  return total;
}

KnapsackInstance random_knapsack(RngStream& rng, int max_items,
                                 long long max_weight_value) {
  KnapsackInstance k;
  const int n = static_cast<int>(rng.uniform_int(1, max_items));
  long long w_sum = 0;
  long long v_sum = 0;
  for (int i = 0; i < n; ++i) {
    k.weights.push_back(rng.uniform_int(0, max_weight_value));
    k.values.push_back(rng.uniform_int(0, max_weight_value));
    w_sum += k.weights.back();
    v_sum += k.values.back();
  }
  k.capacity = rng.uniform_int(0, w_sum);
  k.target = rng.uniform_int(0, v_sum + 2);
  return k;
}

SockPlanInstance random_sockplan(RngStream& rng, int max_socks,
                                 int max_days) {
  SockPlanInstance inst;
  const int n = static_cast<int>(rng.uniform_int(2, max_socks));
  inst.T = static_cast<int>(rng.uniform_int(1, max_days));
  inst.kappa = static_cast<int>(rng.uniform_int(2, 6));
  for (int i = 0; i < n; ++i) {
    inst.prices.push_back(rng.uniform_int(0, 5));
    inst.theta.push_back(static_cast<int>(rng.uniform_int(1, 3)));
    inst.budget += inst.prices.back();
  }
  inst.xi.assign(n, std::vector<Rational>(n, Rational(0, 1)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const long long den = rng.uniform_int(1, 4);
      const long long num = rng.uniform_int(0, den);
      inst.xi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          Rational(num, den);
      inst.xi[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          inst.xi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return inst;
}

CoverageInstance random_coverage(RngStream& rng, int max_sets,
                                 int max_elements) {
  CoverageInstance inst;
  const int m = static_cast<int>(rng.uniform_int(1, max_elements));
  const int n = static_cast<int>(rng.uniform_int(1, max_sets));
  for (int e = 0; e < m; ++e) {
    inst.weights.push_back(static_cast<double>(rng.uniform_int(0, 9)));
  }
  long long cost_sum = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> members;
    for (int e = 0; e < m; ++e) {
      if (rng.bernoulli(0.4)) members.push_back(e);
    }
    inst.sets.push_back(std::move(members));
    inst.costs.push_back(rng.uniform_int(1, 9));
    cost_sum += inst.costs.back();
  }
  inst.budget = rng.uniform_int(1, cost_sum);
  return inst;
}

std::string knapsack_to_json(const KnapsackInstance& k) {
  json j;
  j["weights"] = k.weights;
  j["values"] = k.values;
  j["capacity"] = k.capacity;
  j["target"] = k.target;
  return j.dump(2) + "\n";
}

KnapsackInstance knapsack_from_json(const std::string& text) {
  KnapsackInstance k;
  try {
    const json j = json::parse(text);
    k.weights = j.at("weights").get<std::vector<long long>>();
    k.values = j.at("values").get<std::vector<long long>>();
    k.capacity = j.at("capacity").get<long long>();
    k.target = j.at("target").get<long long>();
  } catch (const json::exception& e) {
    bad_data(std::string("knapsack JSON: ") + e.what());
  }
  k.validate();
  return k;
}

std::string sockplan_to_json(const SockPlanInstance& inst) {
  json j;
  j["T"] = inst.T;
  j["kappa"] = inst.kappa;
  j["budget"] = inst.budget;
  j["prices"] = inst.prices;
  j["theta"] = inst.theta;
  json rows = json::array();
  for (const auto& row : inst.xi) {
    json r = json::array();
    for (const Rational& v : row) r.push_back({v.num, v.den});
    rows.push_back(std::move(r));
  }
  j["xi"] = std::move(rows);
  j["K"] = {inst.threshold_k.num, inst.threshold_k.den};
  j["k_defined"] = inst.k_defined;
  j["degenerate"] = inst.degenerate;
  return j.dump(2) + "\n";
}

SockPlanInstance sockplan_from_json(const std::string& text) {
  SockPlanInstance inst;
  try {
    const json j = json::parse(text);
    inst.T = j.at("T").get<int>();
    inst.kappa = j.at("kappa").get<int>();
    inst.budget = j.at("budget").get<long long>();
    inst.prices = j.at("prices").get<std::vector<long long>>();
    inst.theta = j.at("theta").get<std::vector<int>>();
    for (const json& row : j.at("xi")) {
      std::vector<Rational> r;
      for (const json& v : row) {
        r.emplace_back(v.at(0).get<long long>(), v.at(1).get<long long>());
      }
      inst.xi.push_back(std::move(r));
    }
    if (j.contains("K")) {
      inst.threshold_k = Rational(j["K"].at(0).get<long long>(),
                                  j["K"].at(1).get<long long>());
    }
    inst.k_defined = j.value("k_defined", true);
    inst.degenerate = j.value("degenerate", false);
  } catch (const json::exception& e) {
    bad_data(std::string("planning instance JSON: ") + e.what());
  }
  inst.validate();
  return inst;
}

}  // namespace sockopt
