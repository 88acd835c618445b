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

// JSONL readers and writers for samples, annotations and labeled datasets.
//
//   samples.jsonl      {"id","source","text"}
//   annotations.jsonl  {"sample_id","annotator_id","trait","score","ts"}
//   dataset.jsonl      {"sample_id","text","trait","label","annotation_count"}

#pragma once

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "traitforge/corpus.hpp"

namespace traitforge {

using Json = nlohmann::json;

namespace detail {

// Calls fn(json, line_number) for every non-blank line. Parse failures and
// exceptions thrown by fn are rethrown as DataError tagged with the line.
inline void for_each_jsonl(std::istream& in, std::string_view what,
                           const std::function<void(const Json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw DataError(std::string(what) + " line " + std::to_string(line_no) +
                      ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) {
      throw DataError(std::string(what) + " line " + std::to_string(line_no) +
                      ": expected a JSON object");
    }
    try {
      fn(j, line_no);
    } catch (const Json::exception& e) {
      throw DataError(std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

inline const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace detail

inline std::vector<TextSample> parse_samples(std::istream& in) {
  std::vector<TextSample> out;
  std::set<std::string> ids;
  detail::for_each_jsonl(in, "samples", [&](const Json& j, std::size_t) {
    std::string id = detail::require(j, "id").get<std::string>();
    std::string source_str = detail::require(j, "source").get<std::string>();
    auto source = parse_source(source_str);
    if (!source) throw DataError("unknown source '" + source_str + "'");
    std::string text = detail::require(j, "text").get<std::string>();
    if (!ids.insert(id).second) {
      throw DataError("duplicate sample id '" + id + "'");
    }
    out.push_back(TextSample::make(std::move(id), *source, std::move(text)));
  });
  return out;
}

inline std::vector<TextSample> ingest_samples(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_samples(in);
}

inline std::vector<Annotation> parse_annotations(std::istream& in) {
  std::vector<Annotation> out;
  detail::for_each_jsonl(in, "annotations", [&](const Json& j, std::size_t) {
    Annotation a;
    a.sample_id = detail::require(j, "sample_id").get<std::string>();
    a.annotator_id = detail::require(j, "annotator_id").get<std::string>();
    a.trait = parse_trait_or_throw(detail::require(j, "trait").get<std::string>());
    a.score = detail::require(j, "score").get<int>();
    if (!valid_score(a.score)) {
      throw DataError("score " + std::to_string(a.score) + " outside [-3, 3]");
    }
    a.timestamp = j.value("ts", std::int64_t{0});
    out.push_back(std::move(a));
  });
  check_unique_annotations(out);
  return out;
}

inline std::vector<Annotation> ingest_annotations(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_annotations(in);
}

inline Json to_json(const TextSample& s) {
  return Json{{"id", s.id}, {"source", source_name(s.source)}, {"text", s.text}};
}

inline Json to_json(const Annotation& a) {
  return Json{{"sample_id", a.sample_id},
              {"annotator_id", a.annotator_id},
              {"trait", trait_name(a.trait)},
              {"score", a.score},
              {"ts", a.timestamp}};
}

inline Json to_json(const LabeledExample& e) {
  return Json{{"sample_id", e.sample_id},
              {"text", e.text},
              {"trait", trait_name(e.trait)},
              {"label", e.label},
              {"annotation_count", e.annotation_count},
              {"source", source_name(e.source)}};
}

template <typename Range>
void write_jsonl(std::ostream& out, const Range& items) {
  for (const auto& item : items) out << to_json(item).dump() << '\n';
}

// Labels are read on the scale [lo, hi] and mapped onto [-3, 3]; the
// defaults read them as-is.
inline Dataset parse_dataset(std::istream& in, std::string name, double lo = kScoreMin,
                             double hi = kScoreMax) {
  if (!(lo < hi)) throw DataError("invalid label scale");
  const bool rescale = lo != kScoreMin || hi != kScoreMax;
  Dataset ds;
  ds.name = std::move(name);
  std::set<std::pair<std::string, TraitId>> seen;
  std::set<std::string> samples;
  detail::for_each_jsonl(in, "dataset", [&](const Json& j, std::size_t) {
    LabeledExample e;
    e.sample_id = detail::require(j, "sample_id").get<std::string>();
    e.text = detail::require(j, "text").get<std::string>();
    e.trait = parse_trait_or_throw(detail::require(j, "trait").get<std::string>());
    e.label = detail::require(j, "label").get<double>();
    e.annotation_count = j.value("annotation_count", std::size_t{1});
    if (rescale) {
      const double raw[] = {e.label};
      e.label = rescale_scores(raw, lo, hi).front();
    } else if (!(e.label >= kScoreMin && e.label <= kScoreMax)) {
      throw DataError("label " + std::to_string(e.label) + " outside [-3, 3]");
    }
    if (e.annotation_count < 1) throw DataError("annotation_count must be >= 1");
    if (!seen.emplace(e.sample_id, e.trait).second) {
      throw DataError("duplicate example for sample '" + e.sample_id + "', trait " +
                      std::string(trait_name(e.trait)));
    }
    if (auto it = j.find("source"); it != j.end()) {
      auto source = parse_source(it->get<std::string>());
      if (!source) throw DataError("unknown source '" + it->get<std::string>() + "'");
      e.source = *source;
    }
    if (samples.insert(e.sample_id).second) ++ds.provenance[std::string(source_name(e.source))];
    ds.examples.push_back(std::move(e));
  });
  return ds;
}

inline Dataset read_dataset(const std::string& path, double lo = kScoreMin,
                            double hi = kScoreMax) {
  auto in = detail::open_input(path);
  return parse_dataset(in, path, lo, hi);
}

inline void write_dataset(std::ostream& out, const Dataset& ds) { write_jsonl(out, ds.examples); }

inline Json to_json(const Histogram& h) {
  return Json{{"centers", h.centers}, {"counts", h.counts}};
}

inline Json to_json(const StatsReport& r) {
  Json traits = Json::object();
  for (TraitId t : kAllTraits) {
    traits[std::string(trait_name(t))] = {
        {"examples", r.examples_per_trait[trait_index(t)]},
        {"histogram", to_json(r.trait_histograms[trait_index(t)])}};
  }
  Json sources = Json::object();
  for (const auto& [source, hs] : r.source_histograms) {
    Json per = Json::object();
    for (TraitId t : kAllTraits) per[std::string(trait_name(t))] = to_json(hs[trait_index(t)]);
    sources[source] = {{"samples", r.samples_per_source.at(source)}, {"histograms", per}};
  }
  return Json{{"annotations", r.annotation_count},
              {"annotated_samples", r.annotated_samples},
              {"mean_annotations_per_sample", r.mean_annotations_per_sample},
              {"traits", traits},
              {"sources", sources}};
}

}  // namespace traitforge
