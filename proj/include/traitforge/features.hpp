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

// TF-IDF featurization over two namespaced term spaces:
//   "w:<tokens>"  word n-grams (default n = 1, 2) joined by single spaces
//   "c:<chars>"   character n-grams (default n = 4) over the lowercased,
//                 whitespace-collapsed text, spaces and punctuation included
//
// idf(t) = ln((1 + N) / (1 + df(t))) + 1, weight = count * idf, and every
// output vector is L2-normalized over the concatenated space.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "traitforge/common.hpp"
#include "traitforge/sparse.hpp"
#include "traitforge/utf8.hpp"

namespace traitforge {

struct TokenStream {
  std::vector<std::string> tokens;
  std::string normalized_text;
};

inline TokenStream tokenize(std::string_view text) {
  TokenStream ts;
  std::string current;
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::to_lower(utf8::decode_one(text, pos));
    if (utf8::is_space(cp)) {
      if (!ts.normalized_text.empty()) pending_space = true;
    } else {
      if (pending_space) ts.normalized_text.push_back(' ');
      pending_space = false;
      utf8::append(ts.normalized_text, cp);
    }
    if (utf8::is_alnum(cp)) {
      utf8::append(current, cp);
    } else if (!current.empty()) {
      ts.tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) ts.tokens.push_back(std::move(current));
  return ts;
}

struct FeaturizerConfig {
  std::vector<int> word_ngrams{1, 2};
  std::vector<int> char_ngrams{4};
  std::size_t min_df = 2;
  std::optional<std::size_t> max_features = 200000;

  bool operator==(const FeaturizerConfig&) const = default;
};

using TermCounts = std::map<std::string, std::size_t>;

inline TermCounts extract_terms(const TokenStream& stream, const FeaturizerConfig& config = {}) {
  TermCounts terms;
  for (int n : config.word_ngrams) {
    if (n < 1) continue;
    const auto width = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + width <= stream.tokens.size(); ++i) {
      std::string term = "w:";
      for (std::size_t k = 0; k < width; ++k) {
        if (k) term.push_back(' ');
        term += stream.tokens[i + k];
      }
      ++terms[term];
    }
  }
  if (!config.char_ngrams.empty()) {
    const std::u32string chars = utf8::decode(stream.normalized_text);
    for (int n : config.char_ngrams) {
      if (n < 1) continue;
      const auto width = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + width <= chars.size(); ++i) {
        ++terms["c:" + utf8::encode(std::u32string_view(chars).substr(i, width))];
      }
    }
  }
  return terms;
}

class FeaturizerModel {
 public:
  FeaturizerModel() = default;

  // Rebuilds a model from serialized parts; terms are indexed by position.
  FeaturizerModel(FeaturizerConfig config, std::vector<std::string> terms,
                  std::vector<double> idf, std::size_t corpus_size)
      : config_(std::move(config)),
        terms_(std::move(terms)),
        idf_(std::move(idf)),
        corpus_size_(corpus_size) {
    if (terms_.size() != idf_.size()) throw DataError("vocabulary and idf sizes differ");
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second) {
        throw DataError("duplicate vocabulary term '" + terms_[i] + "'");
      }
    }
  }

  const FeaturizerConfig& config() const { return config_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t dimension() const { return terms_.size(); }
  std::size_t corpus_size() const { return corpus_size_; }

  std::optional<std::uint32_t> column(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  SparseVector transform(std::string_view text) const {
    const TermCounts counts = extract_terms(tokenize(text), config_);
    std::vector<std::pair<std::uint32_t, double>> entries;
    entries.reserve(counts.size());
    for (const auto& [term, count] : counts) {
      auto it = index_.find(term);
      if (it == index_.end()) continue;
      entries.emplace_back(it->second, static_cast<double>(count) * idf_[it->second]);
    }
    SparseVector v = make_sparse(dimension(), std::move(entries));
    const double norm = v.norm();
    if (norm > 0.0) {
      for (double& x : v.values) x /= norm;
    }
    return v;
  }

  std::vector<SparseVector> transform_all(std::span<const std::string> texts) const {
    std::vector<SparseVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(transform(t));
    return out;
  }

  bool operator==(const FeaturizerModel& other) const {
    return config_ == other.config_ && terms_ == other.terms_ && idf_ == other.idf_ &&
           corpus_size_ == other.corpus_size_;
  }

 private:
  FeaturizerConfig config_;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::size_t corpus_size_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline double smoothed_idf(std::size_t corpus_size, std::size_t df) {
  return std::log((1.0 + static_cast<double>(corpus_size)) / (1.0 + static_cast<double>(df))) +
         1.0;
}

// Keeps terms with df >= min_df, caps the vocabulary at max_features by
// (df descending, term ascending), and assigns columns in term order.
inline FeaturizerModel fit(std::span<const std::string> corpus, const FeaturizerConfig& config = {}) {
  if (corpus.empty()) throw DataError("cannot fit a featurizer on an empty corpus");
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    for (const auto& [term, count] : extract_terms(tokenize(doc), config)) ++df[term];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, d] : df) {
    if (d >= config.min_df) kept.emplace_back(term, d);
  }
  if (config.max_features && kept.size() > *config.max_features) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    kept.resize(*config.max_features);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<std::string> terms;
  std::vector<double> idf;
  terms.reserve(kept.size());
  idf.reserve(kept.size());
  for (auto& [term, d] : kept) {
    terms.push_back(std::move(term));
    idf.push_back(smoothed_idf(corpus.size(), d));
  }
  return FeaturizerModel(config, std::move(terms), std::move(idf), corpus.size());
}

}  // namespace traitforge
