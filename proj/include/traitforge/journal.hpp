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

// Append-only JSONL journal of annotation events. One record per line:
//
//   {"seq":1,"type":"session","annotator_id":"a1","event":"register","ts":...}
//   {"seq":2,"type":"annotation","sample_id":...,"annotator_id":...,
//    "trait":"openness","score":3,"ts":...}
//   {"seq":3,"type":"own_text","sample_id":"student-000001",
//    "annotator_id":...,"text":...,"ts":...}
//
// Sequence numbers start at 1 and increase by one per record. Each append is
// flushed and fsync'ed before it returns.

#pragma once

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "traitforge/corpus.hpp"
#include "traitforge/log.hpp"

namespace traitforge {

using Json = nlohmann::json;

struct SessionEvent {
  std::string annotator_id;
  std::string event;
  std::int64_t timestamp = 0;
  bool operator==(const SessionEvent&) const = default;
};

struct OwnTextEvent {
  std::string sample_id;
  std::string annotator_id;
  std::string text;
  std::int64_t timestamp = 0;
  bool operator==(const OwnTextEvent&) const = default;
};

struct JournalRecord {
  std::uint64_t seq = 0;
  std::variant<Annotation, OwnTextEvent, SessionEvent> body;
  bool operator==(const JournalRecord&) const = default;
};

inline Json to_json(const JournalRecord& r) {
  Json j{{"seq", r.seq}};
  if (const auto* a = std::get_if<Annotation>(&r.body)) {
    j["type"] = "annotation";
    j["sample_id"] = a->sample_id;
    j["annotator_id"] = a->annotator_id;
    j["trait"] = trait_name(a->trait);
    j["score"] = a->score;
    j["ts"] = a->timestamp;
  } else if (const auto* o = std::get_if<OwnTextEvent>(&r.body)) {
    j["type"] = "own_text";
    j["sample_id"] = o->sample_id;
    j["annotator_id"] = o->annotator_id;
    j["text"] = o->text;
    j["ts"] = o->timestamp;
  } else {
    const auto& s = std::get<SessionEvent>(r.body);
    j["type"] = "session";
    j["annotator_id"] = s.annotator_id;
    j["event"] = s.event;
    j["ts"] = s.timestamp;
  }
  return j;
}

inline JournalRecord journal_record_from_json(const Json& j) {
  JournalRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  const std::string type = j.at("type").get<std::string>();
  if (type == "annotation") {
    Annotation a;
    a.sample_id = j.at("sample_id").get<std::string>();
    a.annotator_id = j.at("annotator_id").get<std::string>();
    a.trait = parse_trait_or_throw(j.at("trait").get<std::string>());
    a.score = j.at("score").get<int>();
    a.timestamp = j.at("ts").get<std::int64_t>();
    if (!valid_score(a.score)) throw DataError("journal score outside [-3, 3]");
    r.body = std::move(a);
  } else if (type == "own_text") {
    r.body = OwnTextEvent{j.at("sample_id").get<std::string>(),
                          j.at("annotator_id").get<std::string>(),
                          j.at("text").get<std::string>(), j.at("ts").get<std::int64_t>()};
  } else if (type == "session") {
    r.body = SessionEvent{j.at("annotator_id").get<std::string>(), j.at("event").get<std::string>(),
                          j.at("ts").get<std::int64_t>()};
  } else {
    throw DataError("unknown journal record type '" + type + "'");
  }
  return r;
}

// Reads every complete record. A final line without a trailing newline is a
// torn write from a crash; it is dropped and its byte offset returned in
// `valid_bytes` so the writer can truncate it away.
inline std::vector<JournalRecord> read_journal(const std::string& path,
                                               std::size_t* valid_bytes = nullptr) {
  std::vector<JournalRecord> records;
  std::ifstream in(path, std::ios::binary);
  if (valid_bytes) *valid_bytes = 0;
  if (!in) return records;
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < bytes.size()) {
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string::npos) {
      log::warn("journal ", path, ": dropping torn final record (", bytes.size() - pos, " bytes)");
      break;
    }
    ++line_no;
    const std::string_view line(bytes.data() + pos, nl - pos);
    if (!line.empty()) {
      JournalRecord r;
      try {
        r = journal_record_from_json(Json::parse(line));
      } catch (const std::exception& e) {
        throw DataError("journal " + path + " line " + std::to_string(line_no) + ": " + e.what());
      }
      const std::uint64_t expected = records.empty() ? 1 : records.back().seq + 1;
      if (r.seq != expected) {
        throw DataError("journal " + path + " line " + std::to_string(line_no) + ": sequence " +
                        std::to_string(r.seq) + " where " + std::to_string(expected) +
                        " was expected");
      }
      records.push_back(std::move(r));
    }
    pos = nl + 1;
  }
  if (valid_bytes) *valid_bytes = pos > bytes.size() ? bytes.size() : pos;
  return records;
}

// Single-writer append handle. Not thread-safe; callers serialize appends.
class JournalWriter {
 public:
  JournalWriter(const std::string& path, std::size_t valid_bytes, bool durable = true)
      : path_(path), durable_(durable) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw DataError("cannot open journal '" + path + "': " + std::strerror(errno));
    if (::ftruncate(fd_, static_cast<off_t>(valid_bytes)) != 0 ||
        ::lseek(fd_, static_cast<off_t>(valid_bytes), SEEK_SET) < 0) {
      ::close(fd_);
      throw DataError("cannot position journal '" + path + "': " + std::strerror(errno));
    }
  }

  JournalWriter(const JournalWriter&) = delete;
  JournalWriter& operator=(const JournalWriter&) = delete;

  ~JournalWriter() {
    if (fd_ >= 0) ::close(fd_);
  }

  void append(const JournalRecord& record) {
    std::string line = to_json(record).dump();
    line.push_back('\n');
    std::size_t written = 0;
    while (written < line.size()) {
      const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw DataError("journal write failed: " + std::string(std::strerror(errno)));
      }
      written += static_cast<std::size_t>(n);
    }
    if (durable_ && ::fsync(fd_) != 0) {
      throw DataError("journal fsync failed: " + std::string(std::strerror(errno)));
    }
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  bool durable_;
  int fd_ = -1;
};

}  // namespace traitforge
