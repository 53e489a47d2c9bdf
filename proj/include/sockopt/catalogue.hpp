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
// Sock designs and the catalogue they live in. A design is a point in a
// discrete feature space (category index per appearance dimension) plus an
// integer price and an ecological footprint. Pair appearance distance is the
// normalized Hamming dissimilarity over the feature vector; compatibility is
// its complement.

#ifndef SOCKOPT_CATALOGUE_HPP_
#define SOCKOPT_CATALOGUE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace sockopt {

using FeatureVector = std::vector<int>;

// Fraction of feature dimensions on which the two vectors disagree, in
// [0, 1]. Throws std::invalid_argument unless both vectors share the same
// non-zero length.
double dissimilarity(const FeatureVector& a, const FeatureVector& b);

// 1 - dissimilarity.
double compatibility(const FeatureVector& a, const FeatureVector& b);

struct SockDesign {
  std::string id;
  FeatureVector features;
  int price = 0;     // integer currency units, >= 1
  double eco = 0.0;  // ecological footprint; defaults to alpha * price
};

struct CatalogueSpec {
  enum class Distinct {
    kAuto,     // without replacement while n_designs <= |feature space|
    kRequire,  // error if distinct vectors are infeasible
  };

  int n_designs = 1248;
  std::vector<int> feature_sizes = {32, 13, 3};
  int price_min = 2;
  int price_max = 10;
  double alpha = 1.0;  // eco = alpha * price
  Distinct distinct = Distinct::kAuto;
};

class Catalogue {
 public:
  Catalogue() = default;
  Catalogue(std::vector<int> feature_sizes, double alpha,
            std::vector<SockDesign> designs);

  const std::vector<int>& feature_sizes() const { return feature_sizes_; }
  double alpha() const { return alpha_; }
  const std::vector<SockDesign>& designs() const { return designs_; }
  const SockDesign& design(std::size_t i) const { return designs_[i]; }
  std::size_t size() const { return designs_.size(); }

  // Dissimilarity between two designs by index.
  double eta(std::size_t i, std::size_t j) const {
    return dissimilarity(designs_[i].features, designs_[j].features);
  }

 private:
  std::vector<int> feature_sizes_;
  double alpha_ = 1.0;
  std::vector<SockDesign> designs_;
};

// Samples a synthetic catalogue. Feature vectors are drawn uniformly,
// without replacement while the requested count fits in the feature space
// (with replacement beyond that under Distinct::kAuto; ConfigError under
// Distinct::kRequire). Prices are uniform integers in
// [price_min, price_max]. Deterministic in the seed.
Catalogue generate_catalogue(const CatalogueSpec& spec, std::uint64_t seed);

// CSV schema: header "design_id,f1,...,fk,price", one design per row.
std::string catalogue_to_csv(const Catalogue& catalogue);

// Parses and validates a catalogue CSV against the expected feature
// cardinalities. Category indices must lie in [0, m_r), design ids must be
// unique, prices must be positive integers. Errors name `name` and the
// offending line. eco is computed as alpha * price.
Catalogue catalogue_from_csv(const std::string& name,
                             const std::string& content,
                             const std::vector<int>& feature_sizes,
                             double alpha);

}  // namespace sockopt

#endif  // SOCKOPT_CATALOGUE_HPP_
