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

#include "sockopt/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <utility>

#include "sockopt/environment.hpp"
#include "sockopt/errors.hpp"
#include "sockopt/io.hpp"
#include "sockopt/policies.hpp"
#include "sockopt/rng.hpp"

namespace sockopt {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double logsumexp(std::span<const double> v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_trial(const ComparisonTrial& t) {
  if (t.m_a < 0.0 || t.m_a > 1.0 || t.m_b < 0.0 || t.m_b > 1.0) {
    throw DataError("trial severities must lie in [0, 1]");
  }
  if (t.y != 0 && t.y != 1) throw DataError("trial choice must be 0 or 1");
}

struct AscentOut {
  double x = 0.0;
  bool converged = false;
};

// Gradient-based bracketed ascent for a concave objective on [0, inf).
AscentOut maximize_concave(const std::function<double(double)>& grad) {
  constexpr double kGradTol = 1e-8;
  constexpr double kWidthTol = 1e-10;
  constexpr double kCap = 1e6;
  if (grad(0.0) <= 0.0) return {0.0, true};  // optimum at the boundary
  double lo = 0.0;
  double hi = 1.0;
  while (grad(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kCap) return {kCap, false};  // likelihood increases without bound
  }
  while (hi - lo > kWidthTol) {
    const double mid = 0.5 * (lo + hi);
    const double g = grad(mid);
    if (std::abs(g) < kGradTol) return {mid, true};
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), true};
}

double draw_truncated(RngStream& rng, const LognormalDist& dist) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double v = rng.lognormal(dist.mu, dist.sigma);
    if (dist.max_value <= 0.0 || v <= dist.max_value) return v;
  }
  return dist.max_value;
}

}  // namespace

void BundleChoiceSet::validate() const {
  if (bundles.size() < 2) throw DataError("choice set needs >= 2 bundles");
  if (chosen < 0 || static_cast<std::size_t>(chosen) >= bundles.size()) {
    throw DataError("chosen bundle index out of range");
  }
}

double choice_probability(double chi, const ComparisonTrial& trial) {
  check_trial(trial);
  if (chi < 0.0) throw ConfigError("chi must be >= 0");
  return sigmoid(chi * (trial.m_b - trial.m_a));
}

std::vector<double> bundle_choice_probabilities(double delta,
                                                const BundleChoiceSet& set) {
  set.validate();
  std::vector<double> u(set.bundles.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Bundle& b = set.bundles[k];
    u[k] = delta * b.diversity - b.c_soc - b.c_rep;
  }
  const double lse = logsumexp(u);
  for (double& x : u) x = std::exp(x - lse);
  return u;
}

EstimationResult fit_chi(std::span<const ComparisonTrial> trials,
                         double ridge) {
  if (trials.empty()) throw DataError("no comparison trials");
  if (ridge < 0.0) throw ConfigError("ridge must be >= 0");
  for (const ComparisonTrial& t : trials) check_trial(t);

  EstimationResult res;
  res.ridge = ridge;
  res.identified = false;
  for (const ComparisonTrial& t : trials) {
    if (t.m_a != t.m_b) res.identified = true;
  }

  const auto grad = [&](double chi) {
    double g = -2.0 * ridge * chi;
    for (const ComparisonTrial& t : trials) {
      const double d = t.m_b - t.m_a;
      g += d * (t.y - sigmoid(chi * d));
    }
    return g;
  };

  if (!res.identified) {
    res.estimate = 0.0;
    res.converged = true;
  } else {
    const AscentOut out = maximize_concave(grad);
    res.estimate = out.x;
    res.converged = out.converged;
  }

  double info = 2.0 * ridge;
  res.log_lik = 0.0;
  for (const ComparisonTrial& t : trials) {
    const double d = t.m_b - t.m_a;
    const double z = res.estimate * d;
    res.log_lik += t.y ? log_sigmoid(z) : log_sigmoid(-z);
    const double p = sigmoid(z);
    info += d * d * p * (1.0 - p);
  }
  res.se = info > 0.0 ? 1.0 / std::sqrt(info)
                      : std::numeric_limits<double>::infinity();
  return res;
}

EstimationResult fit_delta(std::span<const BundleChoiceSet> sets,
                           double ridge) {
  if (sets.empty()) throw DataError("no bundle choice sets");
  if (ridge < 0.0) throw ConfigError("ridge must be >= 0");
  EstimationResult res;
  res.ridge = ridge;
  res.identified = false;
  for (const BundleChoiceSet& s : sets) {
    s.validate();
    for (const Bundle& b : s.bundles) {
      if (b.diversity != s.bundles.front().diversity) res.identified = true;
    }
  }

  const auto grad = [&](double delta) {
    double g = -2.0 * ridge * delta;
    for (const BundleChoiceSet& s : sets) {
      const std::vector<double> p = bundle_choice_probabilities(delta, s);
      double mean_d = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        mean_d += p[k] * s.bundles[k].diversity;
      }
      g += s.bundles[static_cast<std::size_t>(s.chosen)].diversity - mean_d;
    }
    return g;
  };

  if (!res.identified) {
    res.estimate = 0.0;
    res.converged = true;
  } else {
    const AscentOut out = maximize_concave(grad);
    res.estimate = out.x;
    res.converged = out.converged;
  }

  double info = 2.0 * ridge;
  res.log_lik = 0.0;
  for (const BundleChoiceSet& s : sets) {
    std::vector<double> u(s.bundles.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      u[k] = res.estimate * s.bundles[k].diversity - s.bundles[k].c_soc -
             s.bundles[k].c_rep;
    }
    res.log_lik += u[static_cast<std::size_t>(s.chosen)] - logsumexp(u);
    const std::vector<double> p =
        bundle_choice_probabilities(res.estimate, s);
    double mean_d = 0.0;
    double mean_d2 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      mean_d += p[k] * s.bundles[k].diversity;
      mean_d2 += p[k] * s.bundles[k].diversity * s.bundles[k].diversity;
    }
    info += mean_d2 - mean_d * mean_d;
  }
  res.se = info > 0.0 ? 1.0 / std::sqrt(info)
                      : std::numeric_limits<double>::infinity();
  return res;
}

BundleRepOutcome simulate_bundle_replication(
    const Catalogue& catalogue, std::span<const std::size_t> bundle_designs,
    double chi_hat, const ReferenceRegime& regime, std::uint64_t seed,
    std::uint64_t replication, bool keep_trace) {
  if (bundle_designs.size() < 2) {
    throw DataError("bundle needs at least two socks");
  }
  for (std::size_t dsg : bundle_designs) {
    if (dsg >= catalogue.size()) {
      throw DataError("bundle references an unknown design");
    }
  }
  if (chi_hat < 0.0) throw ConfigError("chi must be >= 0");

  RngStream exposure(seed, replication, "exposure");
  RngStream wash(seed, replication, "wash");
  std::vector<SockInstance> avail;
  for (std::size_t slot = 0; slot < bundle_designs.size(); ++slot) {
    SockInstance s;
    s.id = static_cast<std::uint32_t>(slot);
    s.design = static_cast<std::uint32_t>(bundle_designs[slot]);
    s.tau = 0;
    s.theta = regime.theta;
    s.d = regime.d;
    avail.push_back(s);
  }
  std::vector<SockInstance> laundry;
  const EtaFn eta = [&catalogue](const SockInstance& a, const SockInstance& b) {
    return catalogue.eta(a.design, b.design);
  };

  BundleRepOutcome out;
  const auto run_wash = [&](DayRecord* rec) {
    const WashOutcome w = wash_buffer(laundry, wash);
    laundry.clear();
    for (const SockInstance& s : w.returned) avail.push_back(s);
    std::sort(avail.begin(), avail.end(),
              [](const SockInstance& x, const SockInstance& y) {
                return x.id < y.id;
              });
    for (const SockInstance& s : w.lost) {
      out.loss_capacity += static_cast<double>(s.theta - s.tau);
      rec->lost_capacity += static_cast<double>(s.theta - s.tau);
    }
    rec->washed += static_cast<int>(w.returned.size() + w.lost.size());
    rec->lost += static_cast<int>(w.lost.size());
  };

  for (int t = 1; t <= regime.horizon; ++t) {
    DayRecord rec;
    rec.day = t;
    rec.exposed = exposure.bernoulli(regime.rho_ref);
    if (avail.size() < 2 && !laundry.empty()) run_wash(&rec);
    const PairChoice choice = select_greedy(avail, eta);
    if (!choice.found) {
      rec.feasible = false;
      if (keep_trace) out.days.push_back(std::move(rec));
      continue;
    }
    rec.has_pair = true;
    rec.sock1 = avail[choice.a].id;
    rec.sock2 = avail[choice.b].id;
    rec.eta = choice.eta;
    rec.social_cost =
        social_cost(choice.eta, chi_hat, rec.exposed, regime.gamma);
    out.soc += rec.social_cost;
    SockInstance a = avail[choice.a];
    SockInstance b = avail[choice.b];
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(choice.b));
    avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(choice.a));
    for (SockInstance* s : {&a, &b}) {
      s->tau += 1;
      if (s->tau < s->theta) laundry.push_back(*s);
    }
    if (static_cast<int>(laundry.size()) >= regime.kappa) run_wash(&rec);
    if (keep_trace) out.days.push_back(std::move(rec));
  }
  PolicySpec greedy;
  greedy.kind = PolicyKind::kGreedy;
  out.terminal_capacity = terminal_stranded_capacity(avail, eta, greedy);
  return out;
}

BundleCosts simulate_bundle_costs(const Catalogue& catalogue,
                                  std::span<const std::size_t> bundle_designs,
                                  double chi_hat,
                                  const ReferenceRegime& regime,
                                  std::uint64_t seed) {
  if (regime.replications < 1) {
    throw ConfigError("bundle cost simulation needs >= 1 replication");
  }
  BundleCosts costs;
  for (int r = 0; r < regime.replications; ++r) {
    const BundleRepOutcome out = simulate_bundle_replication(
        catalogue, bundle_designs, chi_hat, regime, seed,
        static_cast<std::uint64_t>(r));
    costs.c_soc += out.soc;
    costs.loss_term += out.loss_capacity;
    costs.terminal_term += out.terminal_capacity;
  }
  const double n = static_cast<double>(regime.replications);
  costs.c_soc /= n;
  costs.loss_term /= n;
  costs.terminal_term /= n;
  costs.c_rep = costs.loss_term + costs.terminal_term;
  return costs;
}

std::vector<RespondentData> synthesize_respondents(
    const LognormalDist& chi_dist, const LognormalDist& delta_dist, int n,
    const SynthDesign& design, std::uint64_t seed) {
  if (n < 0) throw ConfigError("respondent count must be >= 0");
  if (design.n_trials < 0 || design.n_sets < 0 || design.bundles_per_set < 2) {
    throw ConfigError("invalid synthetic-respondent design");
  }
  std::vector<RespondentData> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i), "respondent");
    RespondentData r;
    r.chi_true = draw_truncated(rng, chi_dist);
    r.delta_true = draw_truncated(rng, delta_dist);
    r.compliance =
        sigmoid(0.8 * (r.delta_true - 1.4) + 0.5 * rng.normal());

    r.trials.reserve(static_cast<std::size_t>(design.n_trials));
    for (int t = 0; t < design.n_trials; ++t) {
      ComparisonTrial trial;
      trial.m_a = 0.0;  // maximal-contrast design: severities 0 vs 1
      trial.m_b = 1.0;
      trial.y = rng.bernoulli(sigmoid(r.chi_true)) ? 1 : 0;
      r.trials.push_back(trial);
    }

    const int nb = design.bundles_per_set;
    const double share =
        std::clamp(0.6 * r.chi_true / design.chi_scale_ref, 0.1, 0.9);
    for (int s = 0; s < design.n_sets; ++s) {
      BundleChoiceSet set;
      for (int k = 0; k < nb; ++k) {
        Bundle b;
        const double base = 1.8 * static_cast<double>(k) /
                            static_cast<double>(nb - 1);
        b.diversity =
            std::max(0.0, base + (rng.next_double() - 0.5) * 0.2);
        const double cost = std::max(
            0.0, design.delta_anchor * b.diversity +
                     (rng.next_double() - 0.5) * 0.3);
        b.c_soc = share * cost;
        b.c_rep = cost - b.c_soc;
        set.bundles.push_back(b);
      }
      const std::vector<double> probs =
          bundle_choice_probabilities(r.delta_true, set);
      const double u = rng.next_double();
      double acc = 0.0;
      set.chosen = static_cast<int>(probs.size()) - 1;
      for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) {
          set.chosen = static_cast<int>(k);
          break;
        }
      }
      r.sets.push_back(std::move(set));
    }
    out.push_back(std::move(r));
  }
  return out;
}

double pearson_correlation(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("correlation inputs have different lengths");
  }
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double median(std::span<const double> values) {
  if (values.empty()) throw DataError("median of empty range");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EstimationSummary summary_statistics(std::span<const double> chi_hat,
                                     std::span<const double> delta_hat,
                                     std::span<const double> compliance) {
  if (chi_hat.size() != delta_hat.size() ||
      chi_hat.size() != compliance.size()) {
    throw DataError("summary inputs have different lengths");
  }
  if (chi_hat.empty()) throw DataError("summary of empty inputs");
  EstimationSummary s;
  for (std::size_t i = 0; i < chi_hat.size(); ++i) {
    s.chi_mean += chi_hat[i];
    s.delta_mean += delta_hat[i];
  }
  s.chi_mean /= static_cast<double>(chi_hat.size());
  s.delta_mean /= static_cast<double>(chi_hat.size());
  s.chi_median = median(chi_hat);
  s.delta_median = median(delta_hat);
  s.corr_chi_compliance = pearson_correlation(chi_hat, compliance);
  s.corr_delta_compliance = pearson_correlation(delta_hat, compliance);
  s.corr_chi_delta = pearson_correlation(chi_hat, delta_hat);
  return s;
}

std::string trials_to_csv(std::span<const RespondentData> respondents) {
  std::string out = "respondent_id,m_a,m_b,choice\n";
  char id[32];
  for (std::size_t i = 0; i < respondents.size(); ++i) {
    std::snprintf(id, sizeof(id), "r%04zu", i);
    for (const ComparisonTrial& t : respondents[i].trials) {
      out += id;
      out += ',';
      out += fmt_full(t.m_a);
      out += ',';
      out += fmt_full(t.m_b);
      out += ',';
      out += std::to_string(t.y);
      out += '\n';
    }
  }
  return out;
}

TrialsFile trials_from_csv(const std::string& name,
                           const std::string& content) {
  CsvCursor cur(name, content);
  std::string line;
  if (!cur.next_line(&line) || line != "respondent_id,m_a,m_b,choice") {
    cur.fail("expected header respondent_id,m_a,m_b,choice");
  }
  TrialsFile file;
  std::map<std::string, std::size_t> index;
  while (cur.next_line(&line)) {
    const std::vector<std::string> f = split_on(line, ',');
    if (f.size() != 4) cur.fail("expected 4 fields");
    ComparisonTrial t;
    t.m_a = cur.parse_double(f[1]);
    t.m_b = cur.parse_double(f[2]);
    t.y = static_cast<int>(cur.parse_int(f[3]));
    if (t.m_a < 0.0 || t.m_a > 1.0 || t.m_b < 0.0 || t.m_b > 1.0) {
      cur.fail("severities must lie in [0, 1]");
    }
    if (t.y != 0 && t.y != 1) cur.fail("choice must be 0 or 1");
    auto it = index.find(f[0]);
    if (it == index.end()) {
      it = index.emplace(f[0], file.ids.size()).first;
      file.ids.push_back(f[0]);
      file.trials.emplace_back();
    }
    file.trials[it->second].push_back(t);
  }
  if (file.ids.empty()) {
    throw DataError(name + ": no trials");
  }
  return file;
}

std::string bundles_to_csv(std::span<const RespondentData> respondents) {
  std::string out =
      "respondent_id,set_id,bundle_id,diversity,c_soc_hat,c_rep_hat,chosen\n";
  char prefix[64];
  for (std::size_t i = 0; i < respondents.size(); ++i) {
    const RespondentData& r = respondents[i];
    for (std::size_t s = 0; s < r.sets.size(); ++s) {
      for (std::size_t k = 0; k < r.sets[s].bundles.size(); ++k) {
        const Bundle& b = r.sets[s].bundles[k];
        std::snprintf(prefix, sizeof(prefix), "r%04zu,%zu,%zu,", i, s, k);
        out += prefix;
        out += fmt_full(b.diversity);
        out += ',';
        out += fmt_full(b.c_soc);
        out += ',';
        out += fmt_full(b.c_rep);
        out += ',';
        out += (static_cast<std::size_t>(r.sets[s].chosen) == k) ? '1' : '0';
        out += '\n';
      }
    }
  }
  return out;
}

BundlesFile bundles_from_csv(const std::string& name,
                             const std::string& content) {
  CsvCursor cur(name, content);
  std::string line;
  const std::string header =
      "respondent_id,set_id,bundle_id,diversity,c_soc_hat,c_rep_hat,chosen";
  if (!cur.next_line(&line) || line != header) {
    cur.fail("expected header " + header);
  }
  BundlesFile file;
  std::map<std::string, std::size_t> resp_index;
  // Per respondent: set id -> (bundle id -> (bundle, chosen flag)).
  std::vector<std::map<long long, std::map<long long, std::pair<Bundle, int>>>>
      grouped;
  std::vector<std::vector<long long>> set_order;
  while (cur.next_line(&line)) {
    const std::vector<std::string> f = split_on(line, ',');
    if (f.size() != 7) cur.fail("expected 7 fields");
    const long long set_id = cur.parse_int(f[1]);
    const long long bundle_id = cur.parse_int(f[2]);
    Bundle b;
    b.diversity = cur.parse_double(f[3]);
    b.c_soc = cur.parse_double(f[4]);
    b.c_rep = cur.parse_double(f[5]);
    const long long chosen = cur.parse_int(f[6]);
    if (chosen != 0 && chosen != 1) cur.fail("chosen must be 0 or 1");
    auto it = resp_index.find(f[0]);
    if (it == resp_index.end()) {
      it = resp_index.emplace(f[0], file.ids.size()).first;
      file.ids.push_back(f[0]);
      grouped.emplace_back();
      set_order.emplace_back();
    }
    auto& sets = grouped[it->second];
    if (sets.find(set_id) == sets.end()) {
      set_order[it->second].push_back(set_id);
    }
    auto& bundles = sets[set_id];
    if (!bundles.emplace(bundle_id, std::make_pair(b, static_cast<int>(chosen)))
             .second) {
      cur.fail("duplicate bundle id within a set");
    }
  }
  if (file.ids.empty()) throw DataError(name + ": no bundle choice sets");

  for (std::size_t r = 0; r < file.ids.size(); ++r) {
    std::vector<BundleChoiceSet> sets;
    for (long long sid : set_order[r]) {
      const auto& bundles = grouped[r][sid];
      BundleChoiceSet set;
      int chosen_count = 0;
      for (const auto& [bid, entry] : bundles) {
        if (entry.second == 1) {
          set.chosen = static_cast<int>(set.bundles.size());
          ++chosen_count;
        }
        set.bundles.push_back(entry.first);
      }
      if (chosen_count != 1) {
        throw DataError(name + ": set " + std::to_string(sid) + " of " +
                        file.ids[r] + " must mark exactly one chosen bundle");
      }
      set.validate();
      sets.push_back(std::move(set));
    }
    file.sets.push_back(std::move(sets));
  }
  return file;
}

std::string results_to_csv(std::span<const std::string> ids,
                           std::span<const EstimationResult> chi,
                           std::span<const EstimationResult> delta) {
  if (ids.size() != chi.size() || ids.size() != delta.size()) {
    throw DataError("result rows have different lengths");
  }
  std::string out = "respondent_id,chi_hat,chi_se,delta_hat,delta_se,converged\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i];
    out += ',';
    out += fmt_full(chi[i].estimate);
    out += ',';
    out += fmt_full(chi[i].se);
    out += ',';
    out += fmt_full(delta[i].estimate);
    out += ',';
    out += fmt_full(delta[i].se);
    out += ',';
    out += (chi[i].converged && delta[i].converged) ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace sockopt
