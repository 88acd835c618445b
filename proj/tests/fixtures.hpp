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

// Small generated regression problems shared by the model tests.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "traitforge/random.hpp"
#include "traitforge/sparse.hpp"

namespace traitforge::testing_fixture {

struct LinearProblem {
  std::vector<SparseVector> x;
  std::vector<double> y;
  std::vector<double> true_weights;
};

// Rows with about five normal entries, y = x.w + noise, clipped to [-3, 3].
inline LinearProblem linear_problem(std::size_t n, std::size_t dim, std::uint64_t seed,
                                    double noise) {
  Rng rng(seed);
  LinearProblem p;
  p.true_weights.resize(dim);
  for (auto& w : p.true_weights) w = rng.normal() * 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<std::uint32_t, double>> entries;
    const std::size_t k = std::min<std::size_t>(dim, 5);
    for (std::size_t j = 0; j < k; ++j) {
      entries.emplace_back(static_cast<std::uint32_t>(rng.below(dim)), rng.normal());
    }
    SparseVector v = make_sparse(dim, std::move(entries));
    const double y = v.dot(p.true_weights) + noise * rng.normal();
    p.x.push_back(std::move(v));
    p.y.push_back(std::clamp(y, -3.0, 3.0));
  }
  return p;
}

// y = coefficient * x[feature]; the other columns are noise features.
inline LinearProblem single_feature_problem(std::size_t n, std::size_t dim, std::uint32_t feature,
                                            double coefficient, std::uint64_t seed) {
  Rng rng(seed);
  LinearProblem p;
  p.true_weights.assign(dim, 0.0);
  p.true_weights[feature] = coefficient;
  for (std::size_t i = 0; i < n; ++i) {
    const double xj = rng.uniform() * 2.0 - 1.0;
    std::vector<std::pair<std::uint32_t, double>> entries = {{feature, xj}};
    for (int j = 0; j < 3; ++j) {
      const auto col = static_cast<std::uint32_t>(rng.below(dim));
      if (col != feature) entries.emplace_back(col, rng.uniform() * 2.0 - 1.0);
    }
    p.x.push_back(make_sparse(dim, std::move(entries)));
    p.y.push_back(coefficient * xj);
  }
  return p;
}

}  // namespace traitforge::testing_fixture
