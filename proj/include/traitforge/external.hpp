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

// Predictions produced outside this tool (for example by a fine-tuned
// language model), read from JSONL lines {"sample_id","trait","prediction"}
// so they can be scored by the same evaluation code.

#pragma once

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "traitforge/common.hpp"
#include "traitforge/corpus_io.hpp"
#include "traitforge/log.hpp"

namespace traitforge {

class ExternalPredictions {
 public:
  // Returns false if the key already exists.
  bool insert(const std::string& sample_id, TraitId trait, double prediction) {
    return values_.emplace(std::make_pair(sample_id, trait), prediction).second;
  }

  std::optional<double> find(const std::string& sample_id, TraitId trait) const {
    auto it = values_.find({sample_id, trait});
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  double require(const std::string& sample_id, TraitId trait) const {
    auto v = find(sample_id, trait);
    if (!v) {
      throw DataError("missing prediction for sample '" + sample_id + "', trait " +
                      std::string(trait_name(trait)));
    }
    return *v;
  }

  std::size_t size() const { return values_.size(); }
  std::size_t clamped() const { return clamped_; }
  void note_clamped() { ++clamped_; }

 private:
  std::map<std::pair<std::string, TraitId>, double> values_;
  std::size_t clamped_ = 0;
};

inline ExternalPredictions parse_external_predictions(std::istream& in) {
  ExternalPredictions out;
  detail::for_each_jsonl(in, "predictions", [&](const Json& j, std::size_t line_no) {
    const std::string id = detail::require(j, "sample_id").get<std::string>();
    const TraitId trait = parse_trait_or_throw(detail::require(j, "trait").get<std::string>());
    const double raw = detail::require(j, "prediction").get<double>();
    if (std::isnan(raw)) throw DataError("prediction is NaN");
    const double value = clamp_score(raw);
    if (value != raw) {
      log::warn("predictions line ", line_no, ": ", raw, " clamped to ", value);
      out.note_clamped();
    }
    if (!out.insert(id, trait, value)) {
      throw DataError("duplicate prediction for sample '" + id + "', trait " +
                      std::string(trait_name(trait)));
    }
  });
  return out;
}

inline ExternalPredictions load_external_predictions(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_external_predictions(in);
}

}  // namespace traitforge
