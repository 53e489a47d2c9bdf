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

#include "sockopt/catalogue.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "sockopt/errors.hpp"
#include "sockopt/io.hpp"
#include "sockopt/rng.hpp"

namespace sockopt {

double dissimilarity(const FeatureVector& a, const FeatureVector& b) {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument(
        "dissimilarity requires two feature vectors of equal non-zero "
        "length");
  }
  std::size_t diff = 0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r] != b[r]) ++diff;
  }
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

double compatibility(const FeatureVector& a, const FeatureVector& b) {
  return 1.0 - dissimilarity(a, b);
}

Catalogue::Catalogue(std::vector<int> feature_sizes, double alpha,
                     std::vector<SockDesign> designs)
    : feature_sizes_(std::move(feature_sizes)),
      alpha_(alpha),
      designs_(std::move(designs)) {}

namespace {

void validate_spec(const CatalogueSpec& spec) {
  if (spec.n_designs < 1) throw ConfigError("n_designs must be >= 1");
  if (spec.feature_sizes.empty())
    throw ConfigError("feature_sizes must be non-empty");
  for (int m : spec.feature_sizes) {
    if (m < 1) throw ConfigError("feature cardinalities must be >= 1");
  }
  if (spec.price_min < 1 || spec.price_max < spec.price_min)
    throw ConfigError("price range must satisfy 1 <= price_min <= price_max");
  if (spec.alpha < 0.0) throw ConfigError("alpha must be >= 0");
}

// Product of the cardinalities, saturating at max.
std::uint64_t space_size(const std::vector<int>& sizes) {
  std::uint64_t total = 1;
  for (int m : sizes) {
    const std::uint64_t mm = static_cast<std::uint64_t>(m);
    if (total > std::numeric_limits<std::uint64_t>::max() / mm)
      return std::numeric_limits<std::uint64_t>::max();
    total *= mm;
  }
  return total;
}

FeatureVector decode_mixed_radix(std::uint64_t index,
                                 const std::vector<int>& sizes) {
  FeatureVector f(sizes.size());
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    f[r] = static_cast<int>(index % static_cast<std::uint64_t>(sizes[r]));
    index /= static_cast<std::uint64_t>(sizes[r]);
  }
  return f;
}

std::string design_id(int i, int n) {
  int width = 1;
  for (int v = n; v >= 10; v /= 10) ++width;
  width = std::clamp(width, 4, 10);  // int has at most 10 digits
  char buf[16];
  std::snprintf(buf, sizeof(buf), "d%0*d", width, i);
  return std::string(buf);
}

}  // namespace

Catalogue generate_catalogue(const CatalogueSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  const std::uint64_t universe = space_size(spec.feature_sizes);
  const std::uint64_t n = static_cast<std::uint64_t>(spec.n_designs);
  const bool fits = n <= universe;
  if (!fits && spec.distinct == CatalogueSpec::Distinct::kRequire) {
    throw ConfigError("distinct feature vectors requested but n_designs (" +
                      std::to_string(spec.n_designs) +
                      ") exceeds the feature space size (" +
                      std::to_string(universe) + ")");
  }

  RngStream rng(seed, 0, "catalogue");
  std::vector<FeatureVector> vectors;
  vectors.reserve(spec.n_designs);
  if (!fits) {
    for (int i = 0; i < spec.n_designs; ++i) {
      FeatureVector f(spec.feature_sizes.size());
      for (std::size_t r = 0; r < f.size(); ++r)
        f[r] = static_cast<int>(rng.uniform_below(
            static_cast<std::uint64_t>(spec.feature_sizes[r])));
      vectors.push_back(std::move(f));
    }
  } else if (universe <= (1ULL << 22)) {
    // Partial Fisher-Yates over the enumerated space: exact uniform
    // without-replacement sample.
    const auto picks = rng.sample_without_replacement(
        static_cast<std::size_t>(universe), static_cast<std::size_t>(n));
    for (std::size_t idx : picks)
      vectors.push_back(decode_mixed_radix(idx, spec.feature_sizes));
  } else {
    // Rejection sampling; with n <= |U| and |U| > 4M collisions are rare.
    std::set<FeatureVector> seen;
    while (vectors.size() < n) {
      FeatureVector f(spec.feature_sizes.size());
      for (std::size_t r = 0; r < f.size(); ++r)
        f[r] = static_cast<int>(rng.uniform_below(
            static_cast<std::uint64_t>(spec.feature_sizes[r])));
      if (seen.insert(f).second) vectors.push_back(std::move(f));
    }
  }

  std::vector<SockDesign> designs;
  designs.reserve(spec.n_designs);
  for (int i = 0; i < spec.n_designs; ++i) {
    SockDesign d;
    d.id = design_id(i + 1, spec.n_designs);
    d.features = std::move(vectors[static_cast<std::size_t>(i)]);
    d.price =
        static_cast<int>(rng.uniform_int(spec.price_min, spec.price_max));
    d.eco = spec.alpha * static_cast<double>(d.price);
    designs.push_back(std::move(d));
  }
  return Catalogue(spec.feature_sizes, spec.alpha, std::move(designs));
}

std::string catalogue_to_csv(const Catalogue& catalogue) {
  std::ostringstream out;
  out << "design_id";
  for (std::size_t r = 0; r < catalogue.feature_sizes().size(); ++r)
    out << ",f" << (r + 1);
  out << ",price\n";
  for (const SockDesign& d : catalogue.designs()) {
    out << d.id;
    for (int f : d.features) out << ',' << f;
    out << ',' << d.price << '\n';
  }
  return out.str();
}

Catalogue catalogue_from_csv(const std::string& name,
                             const std::string& content,
                             const std::vector<int>& feature_sizes,
                             double alpha) {
  if (feature_sizes.empty())
    throw ConfigError("feature_sizes must be non-empty");
  const std::size_t k = feature_sizes.size();

  CsvCursor cur(name, content);
  std::string line;
  if (!cur.next_line(&line)) cur.fail("missing header");
  {
    std::ostringstream expected;
    expected << "design_id";
    for (std::size_t r = 0; r < k; ++r) expected << ",f" << (r + 1);
    expected << ",price";
    if (trim(line) != expected.str())
      cur.fail("bad header, expected '" + expected.str() + "'");
  }

  std::vector<SockDesign> designs;
  std::unordered_set<std::string> ids;
  while (cur.next_line(&line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_on(line, ',');
    if (fields.size() != k + 2)
      cur.fail("expected " + std::to_string(k + 2) + " fields, got " +
               std::to_string(fields.size()));
    SockDesign d;
    d.id = trim(fields[0]);
    if (d.id.empty()) cur.fail("empty design_id");
    if (!ids.insert(d.id).second) cur.fail("duplicate design_id '" + d.id + "'");
    d.features.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
      const long long v = cur.parse_int(trim(fields[r + 1]));
      if (v < 0 || v >= feature_sizes[r])
        cur.fail("feature f" + std::to_string(r + 1) + " value " +
                 std::to_string(v) + " outside [0, " +
                 std::to_string(feature_sizes[r]) + ")");
      d.features[r] = static_cast<int>(v);
    }
    const long long p = cur.parse_int(trim(fields[k + 1]));
    if (p < 1) cur.fail("price must be a positive integer");
    d.price = static_cast<int>(p);
    d.eco = alpha * static_cast<double>(d.price);
    designs.push_back(std::move(d));
  }
  // A header-only file is a valid (empty) catalogue.
  return Catalogue(feature_sizes, alpha, std::move(designs));
}

}  // namespace sockopt
