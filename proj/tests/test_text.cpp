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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "traitforge/random.hpp"
#include "traitforge/text.hpp"
#include "traitforge/utf8.hpp"

namespace traitforge {
namespace {

using Strings = std::vector<std::string>;

TEST(Utf8, DecodesSwedishLetters) {
  const auto cps = utf8::decode("åäö");
  ASSERT_EQ(cps.size(), 3u);
  EXPECT_EQ(cps[0], 0xE5u);
  EXPECT_EQ(cps[1], 0xE4u);
  EXPECT_EQ(cps[2], 0xF6u);
  EXPECT_EQ(utf8::encode(cps), "åäö");
}

TEST(Utf8, LowercasesNonAscii) {
  EXPECT_EQ(utf8::to_lower(std::string("ÅÄÖ Hej")), "åäö hej");
  EXPECT_EQ(utf8::to_lower(std::string("ΑΒΓ Ж")), "αβγ ж");
}

TEST(Utf8, InvalidBytesBecomeReplacement) {
  const std::string bad = "a\xC3";  // truncated two-byte sequence
  const auto cps = utf8::decode(bad);
  ASSERT_EQ(cps.size(), 2u);
  EXPECT_EQ(cps[0], static_cast<char32_t>('a'));
  EXPECT_EQ(cps[1], 0xFFFDu);
}

TEST(SplitSentences, BasicSwedish) {
  EXPECT_EQ(split_sentences("Hej. Hur mår du? Bra!"), (Strings{"Hej.", "Hur mår du?", "Bra!"}));
}

TEST(SplitSentences, DecimalPointIsNotABoundary) {
  EXPECT_EQ(split_sentences("3.5 kg"), (Strings{"3.5 kg"}));
}

TEST(SplitSentences, Empty) {
  EXPECT_TRUE(split_sentences("").empty());
  EXPECT_TRUE(split_sentences("   \n ").empty());
}

TEST(SplitSentences, TrailingTextWithoutTerminatorIsASentence) {
  EXPECT_EQ(split_sentences("One. two"), (Strings{"One.", "two"}));
}

TEST(SplitSentences, RepeatedTerminators) {
  EXPECT_EQ(split_sentences("Vad?! Jaså..."), (Strings{"Vad?!", "Jaså..."}));
}

TEST(SplitSentences, ConcatenationMatchesInputModuloWhitespace) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const std::size_t n = rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = rng.below(9);
      text += k == 8 ? std::string("å") : std::string(1, "ab .!? \n"[k]);
    }
    std::string joined;
    for (const auto& s : split_sentences(text)) joined += s;
    std::string squeezed;
    for (char c : text) {
      if (c != ' ' && c != '\n') squeezed.push_back(c);
    }
    std::string joined_squeezed;
    for (char c : joined) {
      if (c != ' ' && c != '\n') joined_squeezed.push_back(c);
    }
    EXPECT_EQ(joined_squeezed, squeezed) << "input: " << text;
  }
}

TEST(Words, RunsOfAlphanumerics) {
  EXPECT_EQ(count_words("Hej, hur mår du?"), 4u);
  EXPECT_EQ(count_words("e-post 3.5"), 4u);
  EXPECT_EQ(count_words("..."), 0u);
  EXPECT_EQ(count_words("Björnbär ÅÄÖ"), 2u);
}

std::string sentences(std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += "Mening nummer " + std::to_string(i + 1) + '.';
  }
  return out;
}

TEST(PrepareSample, SixSentencesKeepsFirstFive) {
  const auto r = prepare_sample(sentences(6));
  ASSERT_TRUE(r.accepted());
  EXPECT_EQ(r.prepared->text, sentences(5));
  EXPECT_EQ(r.prepared->sentence_count, 5u);
  EXPECT_TRUE(r.prepared->truncated);
}

TEST(PrepareSample, OneSentenceIsRejected) {
  const auto r = prepare_sample("Bara en mening här.");
  EXPECT_FALSE(r.accepted());
  EXPECT_NE(r.rejection.find("at least 2"), std::string::npos);
}

TEST(PrepareSample, LongSentencesCutAtWord160) {
  // Three sentences of 70, 70 and 60 words.
  std::string text;
  std::size_t word = 0;
  for (std::size_t len : {70u, 70u, 60u}) {
    if (!text.empty()) text += ' ';
    for (std::size_t i = 0; i < len; ++i) {
      if (i) text += ' ';
      text += "w" + std::to_string(++word);
    }
    text += '.';
  }
  const auto r = prepare_sample(text);
  ASSERT_TRUE(r.accepted());
  EXPECT_EQ(r.prepared->word_count, 160u);
  EXPECT_TRUE(r.prepared->truncated);
  // Ends right after the 160th word, at a word boundary.
  EXPECT_TRUE(r.prepared->text.ends_with(" w160"));
  EXPECT_EQ(r.prepared->sentence_count, 3u);
}

TEST(PrepareSample, WordCutCanDropBelowTwoSentences) {
  // First sentence alone has 170 words, so after the cut one sentence is left.
  std::string text;
  for (int i = 0; i < 170; ++i) text += "ord ";
  text += "slut. Andra meningen.";
  EXPECT_FALSE(prepare_sample(text).accepted());
}

TEST(PrepareSample, ShortTextUnchanged) {
  const std::string text = "Jag gillar katter. De är mjuka!";
  const auto r = prepare_sample(text);
  ASSERT_TRUE(r.accepted());
  EXPECT_EQ(r.prepared->text, text);
  EXPECT_FALSE(r.prepared->truncated);
}

// Property: output never exceeds the caps; accepted output has >= 2 sentences.
TEST(PrepareSample, CapsHoldOnRandomTexts) {
  Rng rng(2026);
  const Strings words = {"hej", "och", "så", "vidare", "3.5", "bra", "öl", "x"};
  const Strings terminators = {".", "!", "?", "", ","};
  for (int trial = 0; trial < 400; ++trial) {
    std::string text;
    const std::size_t tokens = rng.below(400);
    for (std::size_t i = 0; i < tokens; ++i) {
      text += words[rng.below(words.size())];
      text += terminators[rng.below(terminators.size())];
      text += rng.below(10) == 0 ? "\n" : " ";
    }
    const auto r = prepare_sample(text);
    if (!r.accepted()) {
      EXPECT_FALSE(r.rejection.empty());
      continue;
    }
    EXPECT_LE(count_sentences(r.prepared->text), kMaxSentences);
    EXPECT_LE(count_words(r.prepared->text), kMaxWords);
    EXPECT_GE(count_sentences(r.prepared->text), kMinSentences);
    EXPECT_EQ(r.prepared->sentence_count, count_sentences(r.prepared->text));
    EXPECT_EQ(r.prepared->word_count, count_words(r.prepared->text));
    // Idempotent once prepared.
    const auto again = prepare_sample(r.prepared->text);
    ASSERT_TRUE(again.accepted());
    EXPECT_EQ(again.prepared->text, r.prepared->text);
  }
}

}  // namespace
}  // namespace traitforge
