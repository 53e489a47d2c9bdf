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

#include "sockopt/metrics.hpp"

#include <cmath>
#include <map>

namespace sockopt {

double social_cost(double eta, double chi, bool exposed, double gamma) {
  if (!exposed || eta == 0.0) return 0.0;
  return chi * std::pow(eta, gamma);
}

double day_reward(const DayRecord& day, const AgentParams& agent) {
  double purchase_term = 0.0;
  for (const PurchaseRecord& p : day.purchases)
    purchase_term += static_cast<double>(p.price) + agent.lambda * p.eco;
  return -purchase_term - day.social_cost;
}

double shannon_entropy(std::span<const long long> counts) {
  long long total = 0;
  for (long long c : counts) total += c;
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (long long c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

double diversity(std::span<const SockInstance> socks, const EtaFn& eta,
                 DiversityMetric metric) {
  if (metric == DiversityMetric::kEntropy) {
    std::map<std::uint32_t, long long> counts;
    for (const SockInstance& s : socks) ++counts[s.design];
    std::vector<long long> v;
    v.reserve(counts.size());
    for (const auto& [design, c] : counts) v.push_back(c);
    return shannon_entropy(v);
  }
  if (socks.size() < 2) return 0.0;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < socks.size(); ++i) {
    for (std::size_t j = i + 1; j < socks.size(); ++j) {
      sum += eta(socks[i], socks[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

double diversity_utility(double delta, double diversity_value) {
  return delta * diversity_value;
}

double terminal_stranded_capacity(std::span<const SockInstance> inventory,
                                  const EtaFn& eta, const PolicySpec& spec) {
  double total = 0.0;
  for (std::size_t i = 0; i < inventory.size(); ++i) {
    bool pairable = false;
    for (std::size_t j = 0; j < inventory.size() && !pairable; ++j) {
      if (j == i) continue;
      if (pair_acceptable(spec, eta(inventory[i], inventory[j])))
        pairable = true;
    }
    if (!pairable)
      total += static_cast<double>(inventory[i].theta - inventory[i].tau);
  }
  return total;
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  const std::size_t n = values.size();
  if (n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(n);
  if (n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    s.ci_half = 1.96 * sd / std::sqrt(static_cast<double>(n));
    s.has_ci = true;
  }
  return s;
}

RunAggregate aggregate(std::span<const RunMetrics> runs) {
  auto col = [&](double (*get)(const RunMetrics&)) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const RunMetrics& r : runs) v.push_back(get(r));
    return summarize(v);
  };
  RunAggregate a;
  a.socks_purchased = col([](const RunMetrics& r) {
    return static_cast<double>(r.socks_purchased);
  });
  a.money = col([](const RunMetrics& r) { return r.money; });
  a.eco = col([](const RunMetrics& r) { return r.eco; });
  a.social = col([](const RunMetrics& r) { return r.social; });
  a.infeasible_days = col([](const RunMetrics& r) {
    return static_cast<double>(r.infeasible_days);
  });
  a.stranded = col([](const RunMetrics& r) { return r.stranded; });
  a.total_wears = col([](const RunMetrics& r) {
    return static_cast<double>(r.total_wears);
  });
  a.reward_total = col([](const RunMetrics& r) { return r.reward_total; });
  return a;
}

}  // namespace sockopt
