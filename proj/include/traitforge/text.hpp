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

// Sentence and word segmentation plus the sample preparation rule used by
// the annotation tool (>= 2 sentences, at most 5 sentences and 160 words).

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "traitforge/utf8.hpp"

namespace traitforge {

// Half-open byte range into a string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

namespace detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

inline bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Trims whitespace (any Unicode space) from both ends of [begin, end).
inline Span trim(std::string_view text, Span s) {
  std::size_t b = s.begin;
  while (b < s.end) {
    std::size_t p = b;
    if (!utf8::is_space(utf8::decode_one(text, p))) break;
    b = p;
  }
  std::size_t e = s.end;
  while (e > b) {
    // Step back to the start of the previous code point.
    std::size_t start = e - 1;
    while (start > b && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) --start;
    std::size_t p = start;
    if (!utf8::is_space(utf8::decode_one(text, p))) break;
    e = start;
  }
  return {b, e};
}

}  // namespace detail

// A sentence ends at '.', '!' or '?' that is followed by whitespace or the
// end of the text. Returned spans are trimmed and never empty.
inline std::vector<Span> sentence_spans(std::string_view text) {
  std::vector<Span> spans;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = pos;
    utf8::decode_one(text, next);
    if (detail::is_terminator(text[pos])) {
      bool boundary = next >= text.size();
      if (!boundary) {
        std::size_t peek = next;
        boundary = utf8::is_space(utf8::decode_one(text, peek));
      }
      if (boundary) {
        Span s = detail::trim(text, {start, next});
        if (s.begin < s.end) spans.push_back(s);
        start = next;
      }
    }
    pos = next;
  }
  Span tail = detail::trim(text, {start, text.size()});
  if (tail.begin < tail.end) spans.push_back(tail);
  return spans;
}

inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  for (Span s : sentence_spans(text)) {
    out.emplace_back(text.substr(s.begin, s.end - s.begin));
  }
  return out;
}

// A word is a maximal run of Unicode letters and digits.
inline std::vector<Span> word_spans(std::string_view text) {
  std::vector<Span> spans;
  std::size_t pos = 0;
  constexpr std::size_t kNone = std::string_view::npos;
  std::size_t word_start = kNone;
  while (pos < text.size()) {
    std::size_t next = pos;
    const char32_t cp = utf8::decode_one(text, next);
    if (utf8::is_alnum(cp)) {
      if (word_start == kNone) word_start = pos;
    } else if (word_start != kNone) {
      spans.push_back({word_start, pos});
      word_start = kNone;
    }
    pos = next;
  }
  if (word_start != kNone) spans.push_back({word_start, text.size()});
  return spans;
}

inline std::size_t count_sentences(std::string_view text) { return sentence_spans(text).size(); }
inline std::size_t count_words(std::string_view text) { return word_spans(text).size(); }

inline constexpr std::size_t kMinSentences = 2;
inline constexpr std::size_t kMaxSentences = 5;
inline constexpr std::size_t kMaxWords = 160;

struct PreparedText {
  std::string text;
  std::size_t sentence_count = 0;
  std::size_t word_count = 0;
  bool truncated = false;
};

struct PrepareOutcome {
  std::optional<PreparedText> prepared;
  std::string rejection;  // set iff !prepared

  bool accepted() const { return prepared.has_value(); }
};

// Truncates to the first five sentences, then to the first 160 words
// (cutting right after the last character of word 160), and accepts the
// result only if it still has at least two sentences.
inline PrepareOutcome prepare_sample(std::string_view text) {
  std::vector<Span> sentences = sentence_spans(text);
  std::string_view kept = text;
  bool truncated = false;
  if (!sentences.empty()) {
    std::size_t first = sentences.front().begin;
    std::size_t last = sentences.size() > kMaxSentences
                           ? sentences[kMaxSentences - 1].end
                           : sentences.back().end;
    truncated = sentences.size() > kMaxSentences;
    kept = text.substr(first, last - first);
  }
  std::vector<Span> words = word_spans(kept);
  if (words.size() > kMaxWords) {
    kept = kept.substr(0, words[kMaxWords - 1].end);
    truncated = true;
  }

  PrepareOutcome outcome;
  const std::size_t n_sentences = count_sentences(kept);
  if (n_sentences < kMinSentences) {
    outcome.rejection = "text has " + std::to_string(n_sentences) +
                        " sentence(s); at least " + std::to_string(kMinSentences) +
                        " are required";
    return outcome;
  }
  PreparedText prepared;
  prepared.text = std::string(kept);
  prepared.sentence_count = n_sentences;
  prepared.word_count = count_words(kept);
  prepared.truncated = truncated;
  outcome.prepared = std::move(prepared);
  return outcome;
}

}  // namespace traitforge
