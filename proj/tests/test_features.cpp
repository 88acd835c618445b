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

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "traitforge/features.hpp"
#include "traitforge/random.hpp"

namespace traitforge {
namespace {

using Strings = std::vector<std::string>;

FeaturizerConfig words_only(std::size_t min_df) {
  FeaturizerConfig c;
  c.word_ngrams = {1};
  c.char_ngrams = {};
  c.min_df = min_df;
  return c;
}

TEST(Tokenize, PunctuationKeptInNormalizedText) {
  const TokenStream ts = tokenize("Hej, Hej!");
  EXPECT_EQ(ts.tokens, (Strings{"hej", "hej"}));
  EXPECT_EQ(ts.normalized_text, "hej, hej!");
}

TEST(Tokenize, UnicodeLowercasing) {
  EXPECT_EQ(tokenize("Åka BÅT").tokens, (Strings{"åka", "båt"}));
}

TEST(Tokenize, Empty) {
  const TokenStream ts = tokenize("");
  EXPECT_TRUE(ts.tokens.empty());
  EXPECT_EQ(ts.normalized_text, "");
}

TEST(Tokenize, WhitespaceCollapsedAndTrimmed) {
  const TokenStream ts = tokenize("  A \t\n b  ");
  EXPECT_EQ(ts.normalized_text, "a b");
  for (const auto& t : ts.tokens) EXPECT_EQ(t.find(' '), std::string::npos);
}

TEST(ExtractTerms, WordUniAndBigrams) {
  TokenStream ts;
  ts.tokens = {"a", "b", "c"};
  FeaturizerConfig c;
  c.char_ngrams = {};
  const TermCounts terms = extract_terms(ts, c);
  EXPECT_EQ(terms, (TermCounts{{"w:a", 1}, {"w:b", 1}, {"w:c", 1}, {"w:a b", 1}, {"w:b c", 1}}));
}

TEST(ExtractTerms, CharQuadgrams) {
  FeaturizerConfig c;
  c.word_ngrams = {};
  TokenStream four;
  four.normalized_text = "abcd";
  EXPECT_EQ(extract_terms(four, c), (TermCounts{{"c:abcd", 1}}));
  TokenStream five;
  five.normalized_text = "abcde";
  EXPECT_EQ(extract_terms(five, c), (TermCounts{{"c:abcd", 1}, {"c:bcde", 1}}));
}

TEST(ExtractTerms, CharGramsCountCodePoints) {
  FeaturizerConfig c;
  c.word_ngrams = {};
  TokenStream ts;
  ts.normalized_text = "åäöx";
  EXPECT_EQ(extract_terms(ts, c), (TermCounts{{"c:åäöx", 1}}));
}

TEST(Fit, IdfValues) {
  const Strings corpus = {"a b", "a c"};
  const FeaturizerModel m = fit(corpus, words_only(1));
  ASSERT_EQ(m.dimension(), 3u);
  const double idf_a = m.idf()[*m.column("w:a")];
  const double idf_b = m.idf()[*m.column("w:b")];
  EXPECT_DOUBLE_EQ(idf_a, 1.0);
  // ln(3/2) + 1, frozen from the reference implementation.
  EXPECT_NEAR(idf_b, 1.4054651081081644, 1e-15);
  testing_oracle::TfidfOracle oracle;
  oracle.word_n = {1};
  oracle.char_n = {};
  oracle.fit(corpus);
  EXPECT_NEAR(idf_b, oracle.idf.at("w:b"), 1e-15);
}

TEST(Fit, MinDfTwoKeepsOnlyShared) {
  const FeaturizerModel m = fit(Strings{"a b", "a c"}, words_only(2));
  EXPECT_EQ(m.terms(), (Strings{"w:a"}));
}

TEST(Fit, Deterministic) {
  const Strings corpus = {"Hej hopp", "hopp och lek", "Hej då"};
  FeaturizerConfig c;
  c.min_df = 1;
  EXPECT_TRUE(fit(corpus, c) == fit(corpus, c));
}

TEST(Fit, EmptyCorpusRejected) { EXPECT_THROW(fit(Strings{}), DataError); }

TEST(Fit, MaxFeaturesKeepsHighestDfThenLexicographic) {
  FeaturizerConfig c = words_only(1);
  c.max_features = 2;
  // df: a=3, b=2, c=2, d=1 -> keep a and b (b < c).
  const FeaturizerModel m = fit(Strings{"a b c", "a b c d", "a"}, c);
  EXPECT_EQ(m.terms(), (Strings{"w:a", "w:b"}));
}

TEST(Transform, FrozenTwoTermVector) {
  const FeaturizerModel m = fit(Strings{"a b", "a c"}, words_only(1));
  const SparseVector v = m.transform("a b");
  ASSERT_EQ(v.nnz(), 2u);
  // Pre-norm (1, 1.4055); normalized values computed independently in Python.
  EXPECT_NEAR(v.at(*m.column("w:a")), 0.57973867153767, 1e-12);
  EXPECT_NEAR(v.at(*m.column("w:b")), 0.81480247466717, 1e-12);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(Transform, AllOutOfVocabularyIsZero) {
  const FeaturizerModel m = fit(Strings{"a b", "a c"}, words_only(1));
  const SparseVector v = m.transform("zzz qqq");
  EXPECT_TRUE(v.empty());
  EXPECT_EQ(v.dimension, m.dimension());
}

TEST(Transform, Pure) {
  FeaturizerConfig c;
  c.min_df = 1;
  const FeaturizerModel m = fit(Strings{"Det var en gång", "en gång till"}, c);
  EXPECT_EQ(m.transform("en gång"), m.transform("en gång"));
}

std::string random_doc(Rng& rng, std::size_t max_tokens) {
  const Strings vocab = {"hej", "Du", "katt", "hund", "OCH", "x", "yy", "a1", "ok."};
  std::string doc;
  const std::size_t n = rng.below(max_tokens + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) doc += rng.below(5) == 0 ? "  " : " ";
    doc += vocab[rng.below(vocab.size())];
    if (rng.below(6) == 0) doc += ",";
  }
  return doc;
}

TEST(TransformProperty, MatchesReferenceOnRandomMiniCorpora) {
  Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    Strings corpus(1 + rng.below(20));
    for (auto& d : corpus) d = random_doc(rng, 30);
    FeaturizerConfig c;
    c.min_df = 1 + rng.below(2);
    c.max_features = std::nullopt;
    const FeaturizerModel m = fit(corpus, c);
    testing_oracle::TfidfOracle oracle;
    oracle.min_df = c.min_df;
    oracle.fit(corpus);
    ASSERT_EQ(m.dimension(), oracle.idf.size());
    for (const auto& doc : corpus) {
      const SparseVector v = m.transform(doc);
      const auto expected = oracle.transform(doc);
      ASSERT_EQ(v.nnz(), expected.size());
      for (std::size_t i = 0; i < v.nnz(); ++i) {
        const std::string& term = m.terms()[v.indices[i]];
        EXPECT_NEAR(v.values[i], expected.at(term), 1e-12) << term;
      }
    }
  }
}

TEST(TransformProperty, NormIsZeroOrOne) {
  Rng rng(17);
  Strings corpus(30);
  for (auto& d : corpus) d = random_doc(rng, 20);
  const FeaturizerModel m = fit(corpus);
  for (int i = 0; i < 200; ++i) {
    const double n = m.transform(random_doc(rng, 20)).norm();
    EXPECT_TRUE(std::abs(n) < 1e-12 || std::abs(n - 1.0) < 1e-12) << n;
  }
}

TEST(FitProperty, PermutationInvariant) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Strings corpus(2 + rng.below(15));
    for (auto& d : corpus) d = random_doc(rng, 25);
    Strings shuffled = corpus;
    rng.shuffle(std::span<std::string>(shuffled));
    EXPECT_TRUE(fit(corpus) == fit(shuffled));
  }
}

TEST(FitProperty, IdfBounds) {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    Strings corpus(1 + rng.below(20));
    for (auto& d : corpus) d = random_doc(rng, 25);
    FeaturizerConfig c;
    c.min_df = 1;
    const FeaturizerModel m = fit(corpus, c);
    const double upper = 1.0 + std::log(1.0 + static_cast<double>(corpus.size()));
    for (double idf : m.idf()) {
      // df == N gives exactly 1.
      EXPECT_GE(idf, 1.0);
      EXPECT_LE(idf, upper);
    }
  }
}

}  // namespace
}  // namespace traitforge
