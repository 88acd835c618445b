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

// Annotation service: blind sample delivery, trait assignment, score
// submission, annotator-authored texts and progress. All durable state lives
// in the journal; AnnotationState is a fold over it. The HTTP binding is in
// http_api.hpp.

#pragma once

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "traitforge/common.hpp"
#include "traitforge/corpus.hpp"
#include "traitforge/corpus_io.hpp"
#include "traitforge/journal.hpp"
#include "traitforge/log.hpp"
#include "traitforge/random.hpp"
#include "traitforge/text.hpp"

namespace traitforge {

enum class PoolKind { kLr, kHr };

inline std::optional<PoolKind> parse_pool_kind(std::string_view s) {
  if (s == "lr") return PoolKind::kLr;
  if (s == "hr") return PoolKind::kHr;
  return std::nullopt;
}

// A pooled sample as the service sees it. The source is kept for export
// only and never leaves through the API.
struct PoolSample {
  std::string id;
  std::string text;
  Source source = Source::kExternal;
};

// Prepared samples for the pool. For kHr only samples with an extreme
// annotation in `annotations` are kept.
inline std::vector<PoolSample> make_pool(std::span<const TextSample> samples,
                                         std::span<const Annotation> annotations,
                                         PoolKind kind) {
  std::set<std::string> hr;
  if (kind == PoolKind::kHr) hr = build_hr_pool(annotations);
  std::vector<PoolSample> pool;
  for (const auto& s : samples) {
    if (kind == PoolKind::kHr && !hr.contains(s.id)) continue;
    auto outcome = prepare_sample(s.text);
    if (!outcome.accepted()) continue;
    pool.push_back({s.id, std::move(outcome.prepared->text), s.source});
  }
  return pool;
}

struct TraitDescription {
  TraitId trait;
  std::string_view description;
};

inline constexpr std::array<TraitDescription, kNumTraits> kTraitDescriptions = {{
    {TraitId::kOpenness,
     "Curiosity and appetite for new ideas, art and experiences. Low: prefers the familiar "
     "and concrete."},
    {TraitId::kConscientiousness,
     "Organization, diligence and self-discipline. Low: spontaneous, careless with plans."},
    {TraitId::kExtraversion,
     "Sociability, assertiveness and energy drawn from other people. Low: reserved and quiet."},
    {TraitId::kAgreeableness,
     "Warmth, trust and cooperation toward others. Low: critical, competitive, suspicious."},
    {TraitId::kStability,
     "Emotional stability: calm and resilient under stress. Low: anxious, moody, easily upset."},
}};

class ServiceError : public DataError {
 public:
  enum class Kind { kInvalid, kNotFound, kConflict, kRejected };
  ServiceError(Kind kind, const std::string& message) : DataError(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Everything derivable from the base pool plus the journal.
class AnnotationState {
 public:
  explicit AnnotationState(std::vector<PoolSample> base_pool) {
    for (auto& s : base_pool) add_sample(std::move(s));
  }

  // Validates and applies one record. Throws DataError if the record is
  // inconsistent with the current state; the state is unchanged then.
  void apply(const JournalRecord& record) {
    if (record.seq != last_seq_ + 1) {
      throw DataError("journal sequence " + std::to_string(record.seq) + " after " +
                      std::to_string(last_seq_));
    }
    if (const auto* a = std::get_if<Annotation>(&record.body)) {
      check_annotation(*a);
      annotators_.insert(a->annotator_id);
      done_[a->annotator_id][a->sample_id] |= bit(a->trait);
      ++trait_counts_[trait_index(a->trait)];
      ++annotator_counts_[a->annotator_id];
      ++sample_counts_[a->sample_id];
      annotations_.push_back(*a);
    } else if (const auto* o = std::get_if<OwnTextEvent>(&record.body)) {
      if (index_.contains(o->sample_id)) {
        throw DataError("own text reuses sample id '" + o->sample_id + "'");
      }
      annotators_.insert(o->annotator_id);
      add_sample({o->sample_id, o->text, Source::kStudent});
      own_texts_.push_back(*o);
    } else {
      annotators_.insert(std::get<SessionEvent>(record.body).annotator_id);
    }
    last_seq_ = record.seq;
  }

  void check_annotation(const Annotation& a) const {
    if (!valid_score(a.score)) {
      throw ServiceError(ServiceError::Kind::kInvalid,
                         "score " + std::to_string(a.score) + " is outside [-3, 3]");
    }
    if (a.annotator_id.empty()) {
      throw ServiceError(ServiceError::Kind::kInvalid, "annotator id is empty");
    }
    if (!index_.contains(a.sample_id)) {
      throw ServiceError(ServiceError::Kind::kNotFound, "unknown sample '" + a.sample_id + "'");
    }
    if (has_scored(a.annotator_id, a.sample_id, a.trait)) {
      throw ServiceError(ServiceError::Kind::kConflict,
                         "annotator '" + a.annotator_id + "' already scored " +
                             std::string(trait_name(a.trait)) + " for sample '" + a.sample_id +
                             "'");
    }
  }

  bool has_scored(const std::string& annotator, const std::string& sample, TraitId t) const {
    auto it = done_.find(annotator);
    if (it == done_.end()) return false;
    auto jt = it->second.find(sample);
    return jt != it->second.end() && (jt->second & bit(t));
  }

  std::uint8_t scored_mask(const std::string& annotator, const std::string& sample) const {
    auto it = done_.find(annotator);
    if (it == done_.end()) return 0;
    auto jt = it->second.find(sample);
    return jt == it->second.end() ? 0 : jt->second;
  }

  bool knows_sample(const std::string& id) const { return index_.contains(id); }
  bool knows_annotator(const std::string& id) const { return annotators_.contains(id); }

  const std::vector<PoolSample>& pool() const { return pool_; }
  const std::vector<Annotation>& annotations() const { return annotations_; }
  const std::vector<OwnTextEvent>& own_texts() const { return own_texts_; }
  const std::set<std::string>& annotators() const { return annotators_; }
  const std::array<std::size_t, kNumTraits>& trait_counts() const { return trait_counts_; }
  const std::map<std::string, std::size_t>& annotator_counts() const { return annotator_counts_; }
  std::uint64_t last_seq() const { return last_seq_; }

  // Mean number of annotations over samples with at least one annotation.
  double mean_annotations_per_sample() const {
    if (sample_counts_.empty()) return 0.0;
    return static_cast<double>(annotations_.size()) / static_cast<double>(sample_counts_.size());
  }

  // Canonical dump used to compare states.
  Json snapshot() const {
    Json anns = Json::array();
    for (const auto& a : annotations_) anns.push_back(to_json(a));
    Json own = Json::array();
    for (const auto& o : own_texts_) {
      own.push_back({{"sample_id", o.sample_id}, {"annotator_id", o.annotator_id}, {"text", o.text}});
    }
    Json ids = Json::array();
    for (const auto& s : pool_) ids.push_back(s.id);
    return Json{{"last_seq", last_seq_},         {"annotations", anns},
                {"own_texts", own},              {"annotators", annotators_},
                {"trait_counts", trait_counts_}, {"annotator_counts", annotator_counts_},
                {"pool", ids}};
  }

  static std::uint8_t bit(TraitId t) { return static_cast<std::uint8_t>(1u << trait_index(t)); }

 private:
  void add_sample(PoolSample s) {
    if (!index_.emplace(s.id, pool_.size()).second) {
      throw DataError("duplicate pool sample id '" + s.id + "'");
    }
    pool_.push_back(std::move(s));
  }

  std::vector<PoolSample> pool_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Annotation> annotations_;
  std::vector<OwnTextEvent> own_texts_;
  std::set<std::string> annotators_;
  std::unordered_map<std::string, std::unordered_map<std::string, std::uint8_t>> done_;
  std::array<std::size_t, kNumTraits> trait_counts_{};
  std::map<std::string, std::size_t> annotator_counts_;
  std::unordered_map<std::string, std::size_t> sample_counts_;
  std::uint64_t last_seq_ = 0;
};

struct ServiceConfig {
  std::string journal_path;
  double force_probability = 0.5;
  std::uint64_t seed = 0;
  bool durable = true;  // fsync every append
  std::function<std::int64_t()> clock;  // defaults to wall-clock milliseconds
};

struct Assignment {
  std::string sample_id;
  std::string text;
  std::optional<TraitId> assigned;  // nullopt = free choice
  std::vector<TraitId> remaining_choice;
};

struct Progress {
  std::array<std::size_t, kNumTraits> trait_counts{};
  std::map<std::string, std::size_t> annotator_counts;
  double mean_annotations_per_sample = 0.0;
  std::size_t annotations = 0;
  std::size_t pool_size = 0;
  std::uint64_t last_seq = 0;
};

struct OwnTextResult {
  std::string sample_id;
  std::uint64_t seq = 0;
  bool truncated = false;
  std::size_t sentence_count = 0;
};

class AnnotationService {
 public:
  AnnotationService(ServiceConfig config, std::vector<PoolSample> base_pool)
      : config_(std::move(config)), state_(std::move(base_pool)), rng_(config_.seed) {
    if (!(config_.force_probability >= 0.0 && config_.force_probability <= 1.0)) {
      throw DataError("force probability must lie in [0, 1]");
    }
    if (!config_.clock) {
      config_.clock = [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
      };
    }
    std::size_t valid_bytes = 0;
    for (const auto& r : read_journal(config_.journal_path, &valid_bytes)) state_.apply(r);
    writer_.emplace(config_.journal_path, valid_bytes, config_.durable);
    log::info("journal ", config_.journal_path, ": replayed ", state_.last_seq(), " records");
  }

  // nullopt when the pool holds nothing left for this annotator.
  std::optional<Assignment> next(const std::string& annotator,
                                 std::optional<TraitId> requested = std::nullopt) {
    if (annotator.empty()) throw ServiceError(ServiceError::Kind::kInvalid, "annotator is required");
    std::unique_lock lock(mu_);
    if (!state_.knows_annotator(annotator)) {
      commit(SessionEvent{annotator, "register", config_.clock()});
    }

    std::optional<TraitId> trait = requested;
    if (!trait && rng_.bernoulli(config_.force_probability)) trait = least_annotated(annotator);

    std::vector<std::size_t> candidates;
    const auto& pool = state_.pool();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const std::uint8_t mask = state_.scored_mask(annotator, pool[i].id);
      const bool open = trait ? !(mask & AnnotationState::bit(*trait)) : mask != 0x1f;
      if (open) candidates.push_back(i);
    }
    if (candidates.empty()) return std::nullopt;
    const PoolSample& s = pool[candidates[rng_.below(candidates.size())]];

    Assignment out{s.id, s.text, trait, {}};
    if (trait) {
      out.remaining_choice.push_back(*trait);
    } else {
      const std::uint8_t mask = state_.scored_mask(annotator, s.id);
      for (TraitId t : kAllTraits) {
        if (!(mask & AnnotationState::bit(t))) out.remaining_choice.push_back(t);
      }
    }
    return out;
  }

  std::uint64_t annotate(const std::string& sample_id, const std::string& annotator, TraitId trait,
                         int score) {
    std::unique_lock lock(mu_);
    Annotation a{sample_id, annotator, trait, score, config_.clock()};
    state_.check_annotation(a);
    return commit(std::move(a));
  }

  OwnTextResult own_text(const std::string& annotator, const std::string& text) {
    if (annotator.empty()) throw ServiceError(ServiceError::Kind::kInvalid, "annotator is required");
    auto outcome = prepare_sample(text);
    if (!outcome.accepted()) throw ServiceError(ServiceError::Kind::kRejected, outcome.rejection);
    std::unique_lock lock(mu_);
    std::size_t n = state_.own_texts().size() + 1;
    std::string id;
    do {
      char buf[32];
      std::snprintf(buf, sizeof buf, "student-%06zu", n++);
      id = buf;
    } while (state_.knows_sample(id));
    OwnTextResult result{id, 0, outcome.prepared->truncated, outcome.prepared->sentence_count};
    result.seq = commit(OwnTextEvent{id, annotator, outcome.prepared->text, config_.clock()});
    return result;
  }

  Progress progress() const {
    std::shared_lock lock(mu_);
    Progress p;
    p.trait_counts = state_.trait_counts();
    p.annotator_counts = state_.annotator_counts();
    p.mean_annotations_per_sample = state_.mean_annotations_per_sample();
    p.annotations = state_.annotations().size();
    p.pool_size = state_.pool().size();
    p.last_seq = state_.last_seq();
    return p;
  }

  Json snapshot() const {
    std::shared_lock lock(mu_);
    return state_.snapshot();
  }

  // Runs fn with the state under a read lock.
  template <typename Fn>
  auto with_state(Fn&& fn) const {
    std::shared_lock lock(mu_);
    return fn(state_);
  }

  const ServiceConfig& config() const { return config_; }

 private:
  // Among traits this annotator can still score somewhere, the one with the
  // fewest annotations overall; ties drawn with the session RNG.
  std::optional<TraitId> least_annotated(const std::string& annotator) {
    std::uint8_t open = 0;
    for (const auto& s : state_.pool()) {
      open |= static_cast<std::uint8_t>(~state_.scored_mask(annotator, s.id) & 0x1f);
      if (open == 0x1f) break;
    }
    if (!open) return std::nullopt;
    const auto& counts = state_.trait_counts();
    std::size_t best = SIZE_MAX;
    std::vector<TraitId> ties;
    for (TraitId t : kAllTraits) {
      if (!(open & AnnotationState::bit(t))) continue;
      const std::size_t c = counts[trait_index(t)];
      if (c < best) {
        best = c;
        ties.clear();
      }
      if (c == best) ties.push_back(t);
    }
    return ties[rng_.below(ties.size())];
  }

  // Journal first, then state. Caller holds the write lock.
  template <typename Body>
  std::uint64_t commit(Body body) {
    JournalRecord record{state_.last_seq() + 1, std::move(body)};
    writer_->append(record);
    state_.apply(record);
    return record.seq;
  }

  ServiceConfig config_;
  AnnotationState state_;
  Rng rng_;
  std::optional<JournalWriter> writer_;
  mutable std::shared_mutex mu_;
};

struct ExportCounts {
  std::size_t annotations = 0;
  std::size_t samples = 0;
};

// Writes annotation records in the corpus JSONL format, and own texts as
// student samples when `samples` is given.
inline ExportCounts export_annotations(std::span<const JournalRecord> journal,
                                       std::ostream& annotations, std::ostream* samples) {
  ExportCounts counts;
  for (const auto& r : journal) {
    if (const auto* a = std::get_if<Annotation>(&r.body)) {
      annotations << to_json(*a).dump() << '\n';
      ++counts.annotations;
    } else if (const auto* o = std::get_if<OwnTextEvent>(&r.body)) {
      if (samples) {
        *samples << to_json(TextSample::make(o->sample_id, Source::kStudent, o->text)).dump()
                 << '\n';
        ++counts.samples;
      }
    }
  }
  return counts;
}

}  // namespace traitforge
