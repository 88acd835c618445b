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

// Model bundle: one featurizer plus one predictor per trait, stored as a
// single self-describing file.
//
//   line 1   "TRAITFORGE-BUNDLE <format_version>"
//   line 2   "<header_bytes> <payload_bytes> <fnv1a64 hex>"
//   header   JSON: metadata, featurizer config and vocabulary, model layout
//   payload  little-endian IEEE-754 doubles (idf values, biases, weights)
//
// The checksum covers header and payload. Every floating point value lives
// in the payload, so a load reproduces predictions bit for bit. See
// docs/bundle-format.md for the field-by-field layout.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "traitforge/common.hpp"
#include "traitforge/eval.hpp"
#include "traitforge/features.hpp"
#include "traitforge/models.hpp"
#include "traitforge/report.hpp"

namespace traitforge {

inline constexpr int kBundleFormatVersion = 1;
inline constexpr std::string_view kBundleMagic = "TRAITFORGE-BUNDLE";

class BundleError : public DataError {
 public:
  using DataError::DataError;
};

struct BundleMetadata {
  std::string dataset;
  std::int64_t created_at = 0;
  int format_version = kBundleFormatVersion;
  Json training_config = Json::object();
};

struct TraitModelBundle {
  FeaturizerModel featurizer;
  std::array<std::optional<TraitPredictor>, kNumTraits> models;
  BundleMetadata metadata;

  bool partial() const {
    return std::any_of(models.begin(), models.end(), [](const auto& m) { return !m; });
  }

  bool has(TraitId t) const { return models[trait_index(t)].has_value(); }

  double predict_text(TraitId t, std::string_view text) const {
    const auto& m = models[trait_index(t)];
    if (!m) throw DataError("bundle has no model for " + std::string(trait_name(t)));
    return predict(*m, featurizer.transform(text));
  }

  double predict_vector(TraitId t, const SparseVector& x) const {
    const auto& m = models[trait_index(t)];
    if (!m) throw DataError("bundle has no model for " + std::string(trait_name(t)));
    return predict(*m, x);
  }
};

// Fits one featurizer on every distinct text, then one SVR per trait present
// in the dataset (a dummy when requested).
inline TraitModelBundle train_bundle(const Dataset& dataset, const TrainerSpec& spec,
                                     bool dummy = false) {
  std::vector<std::string> texts;
  std::set<std::string_view> seen;
  for (const auto& e : dataset.examples) {
    if (seen.insert(e.sample_id).second) texts.push_back(e.text);
  }
  TraitModelBundle bundle;
  bundle.featurizer = fit(texts, spec.features);
  bundle.metadata.dataset = dataset.name;
  bundle.metadata.training_config = to_json(spec);
  bundle.metadata.training_config["model"] = dummy ? "dummy" : "svr";
  std::array<std::optional<TraitPredictor>, kNumTraits> models;
  detail::parallel_for(kNumTraits, detail::default_threads(), [&](std::size_t i) {
    const auto examples = dataset.for_trait(kAllTraits[i]);
    if (examples.empty()) return;
    const auto y = detail::labels_of(examples);
    if (dummy) {
      models[i] = train_dummy(y);
      return;
    }
    std::vector<SparseVector> x;
    x.reserve(examples.size());
    for (const auto& e : examples) x.push_back(bundle.featurizer.transform(e.text));
    models[i] = train_svr(x, y, spec.svr);
  });
  bundle.models = std::move(models);
  return bundle;
}

// Predicts every (sample, trait) of a dataset with a bundle.
inline ExternalPredictions predict_dataset(const TraitModelBundle& bundle, const Dataset& dataset) {
  ExternalPredictions out;
  std::map<std::string, SparseVector> cache;
  for (const auto& e : dataset.examples) {
    auto it = cache.find(e.sample_id);
    if (it == cache.end()) it = cache.emplace(e.sample_id, bundle.featurizer.transform(e.text)).first;
    out.insert(e.sample_id, e.trait, bundle.predict_vector(e.trait, it->second));
  }
  return out;
}

namespace detail {

inline void put_double(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

inline double get_double(std::string_view in, std::size_t index) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[index * 8 + i])) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

inline Json svr_config_json(const SvrConfig& c) {
  return Json{{"C", c.c},
              {"epsilon", c.epsilon},
              {"epochs", c.epochs},
              {"learning_rate", c.learning_rate},
              {"seed", c.seed}};
}

inline SvrConfig svr_config_from_json(const Json& j) {
  SvrConfig c;
  c.c = j.at("C").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace detail

inline std::string serialize_bundle(const TraitModelBundle& bundle) {
  std::string payload;
  const auto append_block = [&](std::span<const double> values) {
    Json ref{{"offset", payload.size() / 8}, {"count", values.size()}};
    for (double v : values) detail::put_double(payload, v);
    return ref;
  };

  const FeaturizerModel& f = bundle.featurizer;
  Json featurizer{
      {"config",
       {{"word_ngrams", f.config().word_ngrams},
        {"char_ngrams", f.config().char_ngrams},
        {"min_df", f.config().min_df},
        {"max_features",
         f.config().max_features ? Json(*f.config().max_features) : Json(nullptr)}}},
      {"corpus_size", f.corpus_size()},
      {"vocabulary", f.terms()},
      {"idf", append_block(f.idf())}};

  Json models = Json::object();
  for (TraitId t : kAllTraits) {
    const auto& m = bundle.models[trait_index(t)];
    if (!m) continue;
    if (const auto* svr = std::get_if<SvrModel>(&*m)) {
      const double bias[] = {svr->bias};
      models[std::string(trait_name(t))] = {{"kind", "svr"},
                                            {"config", detail::svr_config_json(svr->config)},
                                            {"feature_dimension", svr->feature_dimension},
                                            {"bias", append_block(bias)},
                                            {"weights", append_block(svr->weights)}};
    } else {
      const double mean[] = {std::get<DummyModel>(*m).mean};
      models[std::string(trait_name(t))] = {{"kind", "dummy"}, {"mean", append_block(mean)}};
    }
  }

  Json header{{"format_version", kBundleFormatVersion},
              {"metadata",
               {{"dataset", bundle.metadata.dataset},
                {"created_at", bundle.metadata.created_at},
                {"training_config", bundle.metadata.training_config}}},
              {"partial", bundle.partial()},
              {"featurizer", featurizer},
              {"models", models}};
  const std::string header_bytes = header.dump();
  const std::uint64_t checksum = fnv1a64(header_bytes + payload);

  std::string out;
  out += std::string(kBundleMagic) + " " + std::to_string(kBundleFormatVersion) + "\n";
  out += std::to_string(header_bytes.size()) + " " + std::to_string(payload.size()) + " " +
         hex64(checksum) + "\n";
  out += header_bytes;
  out += payload;
  return out;
}

inline TraitModelBundle deserialize_bundle(std::string_view bytes) {
  const auto line_end = [&](std::size_t from) {
    const std::size_t nl = bytes.find('\n', from);
    if (nl == std::string_view::npos) throw BundleError("bundle checksum error: truncated preamble");
    return nl;
  };
  const std::size_t first = line_end(0);
  std::istringstream magic_line{std::string(bytes.substr(0, first))};
  std::string magic;
  std::string version_str;
  magic_line >> magic >> version_str;
  if (magic != kBundleMagic) throw BundleError("not a traitforge bundle");
  if (version_str != std::to_string(kBundleFormatVersion)) {
    throw BundleError("unsupported bundle format version '" + version_str + "' (expected " +
                      std::to_string(kBundleFormatVersion) + ")");
  }
  const std::size_t second = line_end(first + 1);
  std::istringstream sizes{std::string(bytes.substr(first + 1, second - first - 1))};
  std::size_t header_len = 0;
  std::size_t payload_len = 0;
  std::string checksum_hex;
  if (!(sizes >> header_len >> payload_len >> checksum_hex)) {
    throw BundleError("bundle checksum error: malformed size line");
  }
  const std::string_view body = bytes.substr(second + 1);
  if (body.size() != header_len + payload_len || payload_len % 8 != 0) {
    throw BundleError("bundle checksum error: expected " + std::to_string(header_len + payload_len) +
                      " bytes after preamble, found " + std::to_string(body.size()));
  }
  if (hex64(fnv1a64(body)) != checksum_hex) throw BundleError("bundle checksum mismatch");

  const std::string_view payload = body.substr(header_len);
  const std::size_t payload_doubles = payload_len / 8;
  const auto read_block = [&](const Json& ref) {
    const auto offset = ref.at("offset").get<std::size_t>();
    const auto count = ref.at("count").get<std::size_t>();
    if (offset + count > payload_doubles) throw BundleError("bundle block out of range");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = detail::get_double(payload, offset + i);
    return out;
  };

  TraitModelBundle bundle;
  try {
    const Json header = Json::parse(body.substr(0, header_len));
    if (header.at("format_version").get<int>() != kBundleFormatVersion) {
      throw BundleError("unsupported bundle format version in header");
    }
    const Json& meta = header.at("metadata");
    bundle.metadata.dataset = meta.at("dataset").get<std::string>();
    bundle.metadata.created_at = meta.at("created_at").get<std::int64_t>();
    bundle.metadata.training_config = meta.at("training_config");

    const Json& fj = header.at("featurizer");
    FeaturizerConfig fc;
    fc.word_ngrams = fj.at("config").at("word_ngrams").get<std::vector<int>>();
    fc.char_ngrams = fj.at("config").at("char_ngrams").get<std::vector<int>>();
    fc.min_df = fj.at("config").at("min_df").get<std::size_t>();
    const Json& mf = fj.at("config").at("max_features");
    fc.max_features = mf.is_null() ? std::nullopt : std::optional<std::size_t>(mf.get<std::size_t>());
    bundle.featurizer = FeaturizerModel(fc, fj.at("vocabulary").get<std::vector<std::string>>(),
                                        read_block(fj.at("idf")),
                                        fj.at("corpus_size").get<std::size_t>());

    const Json& models = header.at("models");
    for (TraitId t : kAllTraits) {
      auto it = models.find(std::string(trait_name(t)));
      if (it == models.end()) continue;
      const std::string kind = it->at("kind").get<std::string>();
      if (kind == "svr") {
        SvrModel m;
        m.config = detail::svr_config_from_json(it->at("config"));
        m.feature_dimension = it->at("feature_dimension").get<std::size_t>();
        m.bias = read_block(it->at("bias")).at(0);
        m.weights = read_block(it->at("weights"));
        if (m.weights.size() != m.feature_dimension ||
            m.feature_dimension != bundle.featurizer.dimension()) {
          throw BundleError("bundle weight dimension does not match vocabulary");
        }
        bundle.models[trait_index(t)] = std::move(m);
      } else if (kind == "dummy") {
        bundle.models[trait_index(t)] = DummyModel{read_block(it->at("mean")).at(0)};
      } else {
        throw BundleError("unknown model kind '" + kind + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw BundleError(std::string("malformed bundle header: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw BundleError(std::string("malformed bundle header: ") + e.what());
  }
  return bundle;
}

inline void save_bundle(const TraitModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write bundle to '" + path + "'");
  const std::string bytes = serialize_bundle(bundle);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing bundle to '" + path + "'");
}

inline TraitModelBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open bundle '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_bundle(bytes);
}

}  // namespace traitforge
