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
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "traitforge/common.hpp"
#include "traitforge/text.hpp"

namespace traitforge {

enum class Source : std::uint8_t {
  kForumA,
  kForumB,
  kForumC,
  kForumD,
  kStudent,
  kExternal,
  kSynthetic,
};

inline constexpr std::array<Source, 7> kAllSources = {
    Source::kForumA,  Source::kForumB,   Source::kForumC,   Source::kForumD,
    Source::kStudent, Source::kExternal, Source::kSynthetic};

inline constexpr std::string_view source_name(Source s) {
  constexpr std::array<std::string_view, 7> names = {
      "forum-a", "forum-b", "forum-c", "forum-d", "student", "external", "synthetic"};
  return names[static_cast<std::size_t>(s)];
}

inline std::optional<Source> parse_source(std::string_view name) {
  for (Source s : kAllSources) {
    if (source_name(s) == name) return s;
  }
  return std::nullopt;
}

struct TextSample {
  std::string id;
  Source source = Source::kExternal;
  std::string text;
  std::size_t sentence_count = 0;
  std::size_t word_count = 0;

  static TextSample make(std::string id, Source source, std::string text) {
    TextSample s{std::move(id), source, std::move(text), 0, 0};
    s.sentence_count = count_sentences(s.text);
    s.word_count = count_words(s.text);
    return s;
  }
};

// One annotator's integer judgment of one trait for one sample.
struct Annotation {
  std::string sample_id;
  std::string annotator_id;
  TraitId trait = TraitId::kOpenness;
  int score = 0;
  std::int64_t timestamp = 0;

  bool operator==(const Annotation&) const = default;
};

inline bool valid_score(int score) { return score >= -3 && score <= 3; }

// Compounded per-(sample, trait) training example; label is the mean score.
struct LabeledExample {
  std::string sample_id;
  std::string text;
  TraitId trait = TraitId::kOpenness;
  double label = 0.0;
  std::size_t annotation_count = 1;
  Source source = Source::kExternal;

  bool operator==(const LabeledExample&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<LabeledExample> examples;
  std::map<std::string, std::size_t> provenance;  // source name -> distinct samples

  std::vector<LabeledExample> for_trait(TraitId trait) const {
    std::vector<LabeledExample> out;
    for (const auto& e : examples) {
      if (e.trait == trait) out.push_back(e);
    }
    return out;
  }

  std::size_t distinct_samples() const {
    std::set<std::string_view> ids;
    for (const auto& e : examples) ids.insert(e.sample_id);
    return ids.size();
  }
};

// Averages the scores of annotations that all share one (sample, trait).
inline LabeledExample compound_annotations(std::span<const Annotation> annotations,
                                           std::string_view text = {}) {
  if (annotations.empty()) throw DataError("cannot compound an empty annotation list");
  const Annotation& head = annotations.front();
  double sum = 0.0;
  for (const Annotation& a : annotations) {
    if (a.sample_id != head.sample_id || a.trait != head.trait) {
      throw DataError("annotations for '" + head.sample_id + "'/" +
                      std::string(trait_name(head.trait)) +
                      " mixed with '" + a.sample_id + "'/" +
                      std::string(trait_name(a.trait)));
    }
    sum += a.score;
  }
  LabeledExample ex;
  ex.sample_id = head.sample_id;
  ex.text = std::string(text);
  ex.trait = head.trait;
  ex.label = sum / static_cast<double>(annotations.size());
  ex.annotation_count = annotations.size();
  return ex;
}

// Samples with at least one extreme (-3 or 3) annotation on any trait.
inline std::set<std::string> build_hr_pool(std::span<const Annotation> annotations) {
  std::set<std::string> pool;
  for (const Annotation& a : annotations) {
    if (a.score == -3 || a.score == 3) pool.insert(a.sample_id);
  }
  return pool;
}

// Rejects a second annotation for the same (sample, annotator, trait).
inline void check_unique_annotations(std::span<const Annotation> annotations) {
  std::set<std::tuple<std::string_view, std::string_view, TraitId>> seen;
  for (const Annotation& a : annotations) {
    if (!seen.emplace(a.sample_id, a.annotator_id, a.trait).second) {
      throw DataError("duplicate annotation for sample '" + a.sample_id +
                      "', annotator '" + a.annotator_id + "', trait " +
                      std::string(trait_name(a.trait)));
    }
  }
}

// Groups annotations by (sample, trait) and compounds each group. When
// `restrict_to` is given, only those sample ids contribute.
inline Dataset build_dataset(std::string name, std::span<const TextSample> samples,
                             std::span<const Annotation> annotations,
                             const std::set<std::string>* restrict_to = nullptr) {
  std::unordered_map<std::string_view, const TextSample*> by_id;
  for (const TextSample& s : samples) by_id.emplace(s.id, &s);

  std::map<std::pair<std::string, TraitId>, std::vector<Annotation>> groups;
  for (const Annotation& a : annotations) {
    if (!by_id.contains(a.sample_id)) {
      throw DataError("annotation references unknown sample '" + a.sample_id + "'");
    }
    if (restrict_to && !restrict_to->contains(a.sample_id)) continue;
    groups[{a.sample_id, a.trait}].push_back(a);
  }

  Dataset ds;
  ds.name = std::move(name);
  std::set<std::string> counted;
  for (const auto& [key, group] : groups) {
    const TextSample* sample = by_id.at(key.first);
    ds.examples.push_back(compound_annotations(group, sample->text));
    ds.examples.back().source = sample->source;
    if (counted.insert(key.first).second) ++ds.provenance[std::string(source_name(sample->source))];
  }
  return ds;
}

// Affine map of [lo, hi] onto the trait scale [-3, 3].
inline std::vector<double> rescale_scores(std::span<const double> values, double lo, double hi) {
  if (!(lo < hi)) {
    throw DataError("invalid scale: lo (" + std::to_string(lo) + ") must be below hi (" +
                    std::to_string(hi) + ")");
  }
  std::vector<double> out;
  out.reserve(values.size());
  const double span = hi - lo;
  for (double v : values) {
    if (!(v >= lo && v <= hi)) {
      throw DataError("value " + std::to_string(v) + " outside scale [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
    }
    out.push_back(kScoreMin + (v - lo) * (kScoreMax - kScoreMin) / span);
  }
  return out;
}

// Inverse of rescale_scores.
inline std::vector<double> unscale_scores(std::span<const double> values, double lo, double hi) {
  if (!(lo < hi)) throw DataError("invalid scale: lo must be below hi");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    out.push_back(lo + (v - kScoreMin) * (hi - lo) / (kScoreMax - kScoreMin));
  }
  return out;
}

// Histogram over the trait scale. Integer-only data uses 7 unit bins centred
// on -3..3; anything fractional uses 13 half-open bins of width 0.5 centred
// on -3, -2.5, ..., 3.
struct Histogram {
  std::vector<double> centers;
  std::vector<std::size_t> counts;

  std::size_t total() const {
    std::size_t n = 0;
    for (std::size_t c : counts) n += c;
    return n;
  }
};

inline Histogram make_histogram(std::span<const double> labels) {
  const bool integral = std::all_of(labels.begin(), labels.end(),
                                    [](double v) { return v == std::floor(v); });
  Histogram h;
  const double width = integral ? 1.0 : 0.5;
  const std::size_t bins = integral ? 7 : 13;
  for (std::size_t i = 0; i < bins; ++i) h.centers.push_back(kScoreMin + width * i);
  h.counts.assign(bins, 0);
  for (double v : labels) {
    const double clamped = clamp_score(v);
    auto bin = static_cast<std::size_t>(std::floor((clamped - kScoreMin + width / 2) / width));
    h.counts[std::min(bin, bins - 1)]++;
  }
  return h;
}

struct StatsReport {
  std::map<std::string, std::size_t> samples_per_source;  // annotated samples
  std::array<std::size_t, kNumTraits> examples_per_trait{};
  std::array<Histogram, kNumTraits> trait_histograms;
  // source -> trait -> histogram of compounded labels
  std::map<std::string, std::array<Histogram, kNumTraits>> source_histograms;
  std::size_t annotation_count = 0;
  std::size_t annotated_samples = 0;
  double mean_annotations_per_sample = 0.0;
};

// Corpus statistics over compounded labels. Mean annotations per sample is
// taken over samples that received at least one annotation.
inline StatsReport dataset_stats(std::span<const Annotation> annotations,
                                 std::span<const TextSample> samples) {
  Dataset ds = build_dataset("stats", samples, annotations);
  std::unordered_map<std::string_view, Source> source_of;
  for (const TextSample& s : samples) source_of.emplace(s.id, s.source);

  StatsReport r;
  r.samples_per_source = ds.provenance;
  r.annotation_count = annotations.size();
  r.annotated_samples = ds.distinct_samples();
  r.mean_annotations_per_sample =
      r.annotated_samples == 0 ? 0.0
                               : static_cast<double>(r.annotation_count) /
                                     static_cast<double>(r.annotated_samples);

  std::array<std::vector<double>, kNumTraits> labels;
  std::map<std::string, std::array<std::vector<double>, kNumTraits>> by_source;
  for (const LabeledExample& e : ds.examples) {
    labels[trait_index(e.trait)].push_back(e.label);
    by_source[std::string(source_name(source_of.at(e.sample_id)))][trait_index(e.trait)]
        .push_back(e.label);
  }
  for (TraitId t : kAllTraits) {
    r.examples_per_trait[trait_index(t)] = labels[trait_index(t)].size();
    r.trait_histograms[trait_index(t)] = make_histogram(labels[trait_index(t)]);
  }
  for (const auto& [source, per_trait] : by_source) {
    auto& hs = r.source_histograms[source];
    for (std::size_t i = 0; i < kNumTraits; ++i) hs[i] = make_histogram(per_trait[i]);
  }
  return r;
}

}  // namespace traitforge
