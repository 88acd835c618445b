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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "traitforge/common.hpp"

namespace traitforge {

// Sparse row vector with strictly increasing column indices and no stored
// zeros.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dimension = 0;

  std::size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }

  double norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }

  double dot(std::span<const double> dense) const {
    double s = 0.0;
    for (std::size_t i = 0; i < indices.size(); ++i) s += values[i] * dense[indices[i]];
    return s;
  }

  // Scatters `scale * this` into a dense buffer.
  void add_to(std::span<double> dense, double scale) const {
    for (std::size_t i = 0; i < indices.size(); ++i) dense[indices[i]] += scale * values[i];
  }

  double at(std::uint32_t column) const {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] == column) return values[i];
    }
    return 0.0;
  }

  bool operator==(const SparseVector&) const = default;
};

inline SparseVector make_sparse(std::size_t dimension,
                                std::vector<std::pair<std::uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end());
  SparseVector v;
  v.dimension = dimension;
  for (const auto& [col, val] : entries) {
    if (col >= dimension) throw DataError("sparse column out of range");
    if (val == 0.0) continue;
    if (!v.indices.empty() && v.indices.back() == col) {
      v.values.back() += val;
    } else {
      v.indices.push_back(col);
      v.values.push_back(val);
    }
  }
  return v;
}

}  // namespace traitforge
