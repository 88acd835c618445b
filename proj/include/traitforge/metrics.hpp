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

#include <cmath>
#include <span>
#include <string>

#include "traitforge/common.hpp"

namespace traitforge {

namespace detail {

inline void check_pairs(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DataError("length mismatch: " + std::to_string(a) + " actual vs " + std::to_string(b) +
                    " predicted");
  }
  if (a == 0) throw DataError("metrics need at least one value");
}

}  // namespace detail

inline double mae(std::span<const double> y, std::span<const double> y_hat) {
  detail::check_pairs(y.size(), y_hat.size());
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - y_hat[i]);
  return s / static_cast<double>(y.size());
}

inline double mse(std::span<const double> y, std::span<const double> y_hat) {
  detail::check_pairs(y.size(), y_hat.size());
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - y_hat[i];
    s += e * e;
  }
  return s / static_cast<double>(y.size());
}

// Coefficient of determination about the mean of the evaluated actuals.
inline double r2(std::span<const double> y, std::span<const double> y_hat) {
  detail::check_pairs(y.size(), y_hat.size());
  if (y.size() < 2) throw UndefinedError("undefined R²: need at least 2 values");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) throw UndefinedError("undefined R²: actual values have zero variance");
  return 1.0 - ss_res / ss_tot;
}

template <typename T>
double accuracy(std::span<const T> labels, std::span<const T> predicted) {
  detail::check_pairs(labels.size(), predicted.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += labels[i] == predicted[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

struct EvalMetrics {
  double mae = 0.0;
  double mse = 0.0;
  double r2 = 0.0;
};

inline EvalMetrics evaluate(std::span<const double> y, std::span<const double> y_hat) {
  return {mae(y, y_hat), mse(y, y_hat), r2(y, y_hat)};
}

}  // namespace traitforge
