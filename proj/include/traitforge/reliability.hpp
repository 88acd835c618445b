// Copyright 2026 The TraitForge Authors
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

// Krippendorff's alpha for interval data with missing values.
//
// With m_u values in unit u (only units with m_u >= 2 are pairable) and
// n = sum of m_u:
//
//   D_o = 1/n * sum_u [ sum_{i != j in u} (v_i - v_j)^2 / (m_u - 1) ]
//   D_e = 1/(n (n - 1)) * sum_{i != j over all pairable values} (v_i - v_j)^2
//   alpha = 1 - D_o / D_e
//
// The pooled sum uses the identity sum_{i != j} (v_i - v_j)^2 =
// 2 n sum_i (v_i - mean)^2. When D_e is zero every pairable value is equal and
// alpha is reported as 1.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "traitforge/common.hpp"
#include "traitforge/corpus.hpp"

namespace traitforge {

class ReliabilityMatrix {
 public:
  // Adds one score. A second score for the same (unit, annotator) throws.
  void add(const std::string& unit, const std::string& annotator, double score) {
    const std::size_t u = intern(unit, units_, unit_index_);
    const std::size_t a = intern(annotator, annotators_, annotator_index_);
    if (!cells_.emplace(std::make_pair(u, a), score).second) {
      throw DataError("duplicate score for unit '" + unit + "' and annotator '" + annotator + "'");
    }
  }

  const std::vector<std::string>& units() const { return units_; }
  const std::vector<std::string>& annotators() const { return annotators_; }
  std::size_t cell_count() const { return cells_.size(); }

  std::optional<double> at(std::size_t unit, std::size_t annotator) const {
    auto it = cells_.find({unit, annotator});
    if (it == cells_.end()) return std::nullopt;
    return it->second;
  }

  // Values grouped by unit, in unit insertion order.
  std::vector<std::vector<double>> values_by_unit() const {
    std::vector<std::vector<double>> out(units_.size());
    for (const auto& [key, v] : cells_) out[key.first].push_back(v);
    return out;
  }

 private:
  static std::size_t intern(const std::string& key, std::vector<std::string>& names,
                            std::unordered_map<std::string, std::size_t>& index) {
    auto [it, inserted] = index.emplace(key, names.size());
    if (inserted) names.push_back(key);
    return it->second;
  }

  std::vector<std::string> units_;
  std::vector<std::string> annotators_;
  std::unordered_map<std::string, std::size_t> unit_index_;
  std::unordered_map<std::string, std::size_t> annotator_index_;
  std::map<std::pair<std::size_t, std::size_t>, double> cells_;
};

struct AlphaResult {
  double alpha = 1.0;
  std::size_t pairable_values = 0;
  std::size_t units_used = 0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
};

inline AlphaResult krippendorff_alpha(const ReliabilityMatrix& matrix) {
  AlphaResult r;
  double within = 0.0;  // sum_u sum_{i<j} (v_i - v_j)^2 / (m_u - 1)
  std::vector<double> pooled;
  for (const auto& values : matrix.values_by_unit()) {
    const std::size_t m = values.size();
    if (m < 2) continue;
    ++r.units_used;
    double unit_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double d = values[i] - values[j];
        unit_sum += d * d;
      }
    }
    within += 2.0 * unit_sum / static_cast<double>(m - 1);
    pooled.insert(pooled.end(), values.begin(), values.end());
  }
  if (r.units_used == 0) throw UndefinedError("insufficient pairable data");

  const auto n = static_cast<double>(pooled.size());
  r.pairable_values = pooled.size();
  double mean = 0.0;
  for (double v : pooled) mean += v;
  mean /= n;
  double centered = 0.0;
  for (double v : pooled) centered += (v - mean) * (v - mean);

  r.observed_disagreement = within / n;
  r.expected_disagreement = 2.0 * n * centered / (n * (n - 1.0));
  if (r.observed_disagreement == 0.0 || r.expected_disagreement == 0.0) {
    r.alpha = 1.0;
  } else {
    r.alpha = 1.0 - r.observed_disagreement / r.expected_disagreement;
  }
  return r;
}

// Per-trait alpha with samples as units. Traits without pairable data map
// to nullopt.
using FactorAlpha = std::array<std::optional<AlphaResult>, kNumTraits>;

inline FactorAlpha per_factor_alpha(std::span<const Annotation> annotations) {
  std::array<ReliabilityMatrix, kNumTraits> matrices;
  for (const Annotation& a : annotations) {
    matrices[trait_index(a.trait)].add(a.sample_id, a.annotator_id, a.score);
  }
  FactorAlpha out;
  for (std::size_t i = 0; i < kNumTraits; ++i) {
    try {
      out[i] = krippendorff_alpha(matrices[i]);
    } catch (const UndefinedError&) {
      out[i] = std::nullopt;
    }
  }
  return out;
}

}  // namespace traitforge
