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

// Planted-signal corpus generator.
//
// Every document carries a label for each of the five traits. For trait t
// the generator draws a net hit count k in [-max_hits, max_hits], inserts
// |k| words from t's positive (k > 0) or negative (k < 0) lexicon among
// neutral filler words, and sets
//
//   label = clamp(calibration * (positive_hits - negative_hits) + offset
//                 + noise * N(0, 1), -3, 3)
//
// The shifted twin of each document has the same labels and hit counts but
// draws its trait words from a disjoint set of lexicons, so a model that
// learned the training lexicons sees no signal there.

#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "traitforge/common.hpp"
#include "traitforge/corpus.hpp"
#include "traitforge/random.hpp"

namespace traitforge {

struct TraitLexicon {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
};

struct SynthConfig {
  std::size_t documents = 2000;
  std::size_t min_filler_words = 25;
  std::size_t max_filler_words = 45;
  std::size_t min_sentence_words = 5;
  std::size_t max_sentence_words = 10;
  int max_hits = 3;
  double calibration = 1.0;  // label units per net lexicon hit
  double offset = 0.0;
  double noise = 0.5;        // standard deviation of the additive label noise
  std::array<TraitLexicon, kNumTraits> train_lexicons;
  std::array<TraitLexicon, kNumTraits> shift_lexicons;
  std::vector<std::string> filler;
};

struct SynthCorpus {
  Dataset train;
  Dataset shifted;
};

inline double synth_label(const SynthConfig& config, int positive_hits, int negative_hits,
                          double standard_normal) {
  return clamp_score(config.calibration * (positive_hits - negative_hits) + config.offset +
                     config.noise * standard_normal);
}

namespace detail {

// Pronounceable pseudo-words built from consonant-vowel syllables. Keeping
// the consonant sets of the train lexicons, shift lexicons and filler apart
// also keeps their character n-grams apart.
inline std::vector<std::string> make_words(Rng& rng, std::string_view consonants,
                                           std::size_t count, std::set<std::string>& taken) {
  constexpr std::string_view vowels = "aeiou";
  std::vector<std::string> out;
  while (out.size() < count) {
    const std::size_t syllables = 2 + rng.below(2);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w.push_back(consonants[rng.below(consonants.size())]);
      w.push_back(vowels[rng.below(vowels.size())]);
    }
    if (taken.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace detail

// Lexicons and filler derived from a fixed seed, so that corpora generated
// with different run seeds share one vocabulary.
inline SynthConfig default_synth_config(std::size_t lexicon_size = 6,
                                        std::size_t filler_size = 400) {
  SynthConfig config;
  Rng rng(0x7ea1f0a9eULL);
  std::set<std::string> taken;
  for (auto& lex : config.train_lexicons) {
    lex.positive = detail::make_words(rng, "bdgptk", lexicon_size, taken);
    lex.negative = detail::make_words(rng, "bdgptk", lexicon_size, taken);
  }
  for (auto& lex : config.shift_lexicons) {
    lex.positive = detail::make_words(rng, "mnlrvz", lexicon_size, taken);
    lex.negative = detail::make_words(rng, "mnlrvz", lexicon_size, taken);
  }
  config.filler = detail::make_words(rng, "sfhjwcy", filler_size, taken);
  return config;
}

inline void validate_synth_config(const SynthConfig& config) {
  if (config.documents == 0) throw DataError("synthetic corpus needs at least one document");
  if (config.min_filler_words > config.max_filler_words ||
      config.min_sentence_words == 0 || config.min_sentence_words > config.max_sentence_words) {
    throw DataError("invalid synthetic length range");
  }
  if (config.max_hits < 0) throw DataError("max_hits must be non-negative");
  if (config.noise < 0.0) throw DataError("noise must be non-negative");
  if (config.filler.empty()) throw DataError("synthetic filler vocabulary is empty");
  std::set<std::string> train_words;
  for (const auto& lex : config.train_lexicons) {
    if (config.max_hits > 0 && (lex.positive.empty() || lex.negative.empty())) {
      throw DataError("every trait needs non-empty positive and negative lexicons");
    }
    train_words.insert(lex.positive.begin(), lex.positive.end());
    train_words.insert(lex.negative.begin(), lex.negative.end());
  }
  for (const auto& lex : config.shift_lexicons) {
    if (config.max_hits > 0 && (lex.positive.empty() || lex.negative.empty())) {
      throw DataError("every trait needs non-empty shifted positive and negative lexicons");
    }
    for (const auto* words : {&lex.positive, &lex.negative}) {
      for (const auto& w : *words) {
        if (train_words.contains(w)) {
          throw DataError("lexicon word '" + w + "' appears in both the train and shifted domains");
        }
      }
    }
  }
}

namespace detail {

inline std::string compose_document(Rng& rng, const SynthConfig& config,
                                    std::vector<std::string> words) {
  const std::size_t filler = config.min_filler_words +
                             rng.below(config.max_filler_words - config.min_filler_words + 1);
  for (std::size_t i = 0; i < filler; ++i) {
    words.push_back(config.filler[rng.below(config.filler.size())]);
  }
  rng.shuffle(std::span<std::string>(words));
  std::string text;
  std::size_t pos = 0;
  while (pos < words.size()) {
    std::size_t len = config.min_sentence_words +
                      rng.below(config.max_sentence_words - config.min_sentence_words + 1);
    len = std::min(len, words.size() - pos);
    if (!text.empty()) text.push_back(' ');
    for (std::size_t i = 0; i < len; ++i) {
      std::string w = words[pos + i];
      if (i == 0 && !w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      if (i) text.push_back(' ');
      text += w;
    }
    text.push_back('.');
    pos += len;
  }
  return text;
}

}  // namespace detail

inline SynthCorpus generate_synthetic(const SynthConfig& config, std::uint64_t seed) {
  validate_synth_config(config);
  Rng label_rng(seed);
  Rng train_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Rng shift_rng(seed ^ 0xc2b2ae3d27d4eb4fULL);

  SynthCorpus corpus;
  corpus.train.name = "synthetic-train";
  corpus.shifted.name = "synthetic-shifted";
  const auto width = static_cast<std::uint64_t>(2 * config.max_hits + 1);
  for (std::size_t d = 0; d < config.documents; ++d) {
    std::array<int, kNumTraits> net{};
    std::array<double, kNumTraits> labels{};
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      net[t] = static_cast<int>(label_rng.below(width)) - config.max_hits;
      const int pos = std::max(net[t], 0);
      const int neg = std::max(-net[t], 0);
      labels[t] = synth_label(config, pos, neg, label_rng.normal());
    }
    const auto build = [&](Rng& rng, const std::array<TraitLexicon, kNumTraits>& lexicons) {
      std::vector<std::string> words;
      for (std::size_t t = 0; t < kNumTraits; ++t) {
        const auto& pool = net[t] > 0 ? lexicons[t].positive : lexicons[t].negative;
        for (int h = 0; h < std::abs(net[t]); ++h) words.push_back(pool[rng.below(pool.size())]);
      }
      return detail::compose_document(rng, config, std::move(words));
    };
    char id[32];
    std::snprintf(id, sizeof id, "%06zu", d);
    const std::string train_text = build(train_rng, config.train_lexicons);
    const std::string shift_text = build(shift_rng, config.shift_lexicons);
    for (std::size_t t = 0; t < kNumTraits; ++t) {
      corpus.train.examples.push_back(
          {std::string("syn-") + id, train_text, kAllTraits[t], labels[t], 1, Source::kSynthetic});
      corpus.shifted.examples.push_back(
          {std::string("shift-") + id, shift_text, kAllTraits[t], labels[t], 1, Source::kSynthetic});
    }
  }
  corpus.train.provenance["synthetic"] = config.documents;
  corpus.shifted.provenance["synthetic"] = config.documents;
  return corpus;
}

}  // namespace traitforge
