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
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace traitforge {

inline constexpr std::string_view kVersion = "0.1.0";

// Raised for bad input data (malformed files, violated preconditions).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a fixed-size quantity cannot be computed from the data, e.g.
// R² with zero variance or alpha without pairable values.
class UndefinedError : public DataError {
 public:
  using DataError::DataError;
};

// The five factors, in canonical report order (O, C, E, A, S).
enum class TraitId : std::uint8_t {
  kOpenness = 0,
  kConscientiousness = 1,
  kExtraversion = 2,
  kAgreeableness = 3,
  kStability = 4,
};

inline constexpr std::size_t kNumTraits = 5;

inline constexpr std::array<TraitId, kNumTraits> kAllTraits = {
    TraitId::kOpenness, TraitId::kConscientiousness, TraitId::kExtraversion,
    TraitId::kAgreeableness, TraitId::kStability};

inline constexpr std::size_t trait_index(TraitId t) {
  return static_cast<std::size_t>(t);
}

inline constexpr std::string_view trait_name(TraitId t) {
  constexpr std::array<std::string_view, kNumTraits> names = {
      "openness", "conscientiousness", "extraversion", "agreeableness",
      "stability"};
  return names[trait_index(t)];
}

// Capitalized form used in report rows.
inline constexpr std::string_view trait_label(TraitId t) {
  constexpr std::array<std::string_view, kNumTraits> labels = {
      "Openness", "Conscientiousness", "Extraversion", "Agreeableness",
      "Stability"};
  return labels[trait_index(t)];
}

inline std::optional<TraitId> parse_trait(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (TraitId t : kAllTraits) {
    if (trait_name(t) == lower) return t;
  }
  return std::nullopt;
}

inline TraitId parse_trait_or_throw(std::string_view name) {
  auto t = parse_trait(name);
  if (!t) throw DataError("unknown trait '" + std::string(name) + "'");
  return *t;
}

// Trait scores live on a closed [-3, 3] scale.
inline constexpr double kScoreMin = -3.0;
inline constexpr double kScoreMax = 3.0;

inline double clamp_score(double v) { return std::clamp(v, kScoreMin, kScoreMax); }

}  // namespace traitforge
