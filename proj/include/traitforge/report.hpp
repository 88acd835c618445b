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

// Per-factor result tables with Average and Total rows, and their CSV/JSON
// renderings. Every rendered report starts with a reproducibility header:
// tool version, seed, and a hash of the fully resolved run configuration.

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "traitforge/common.hpp"

namespace traitforge {

using Json = nlohmann::json;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct ReportHeader {
  std::string command;
  std::uint64_t seed = 0;
  Json config = Json::object();

  std::string config_hash() const { return hex64(fnv1a64(config.dump())); }

  Json to_json() const {
    return Json{{"tool", "traitforge"},
                {"version", kVersion},
                {"command", command},
                {"seed", seed},
                {"config_hash", config_hash()},
                {"config", config}};
  }

  void write_csv_comment(std::ostream& out) const {
    out << "# traitforge " << kVersion << " " << command << '\n';
    out << "# seed=" << seed << '\n';
    out << "# config_hash=" << config_hash() << '\n';
    out << "# config=" << config.dump() << '\n';
  }
};

struct ReportTable {
  std::string title;
  std::string row_header = "Factor";
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  bool summary = true;

  void add_row(std::string label, std::vector<double> values) {
    if (values.size() != columns.size()) throw DataError("row width does not match columns");
    rows.emplace_back(std::move(label), std::move(values));
  }

  std::vector<double> total() const {
    std::vector<double> t(columns.size(), 0.0);
    for (const auto& [label, values] : rows) {
      for (std::size_t i = 0; i < values.size(); ++i) t[i] += values[i];
    }
    return t;
  }

  std::vector<double> average() const {
    std::vector<double> a = total();
    if (rows.empty()) return a;
    for (double& v : a) v /= static_cast<double>(rows.size());
    return a;
  }

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw DataError("no column '" + std::string(name) + "' in report");
  }

  std::vector<double> column(std::string_view name) const {
    const std::size_t idx = column_index(name);
    std::vector<double> out;
    for (const auto& [label, values] : rows) out.push_back(values[idx]);
    return out;
  }
};

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline void write_csv(std::ostream& out, const ReportHeader& header, const ReportTable& table) {
  header.write_csv_comment(out);
  if (!table.title.empty()) out << "# table=" << table.title << '\n';
  out << table.row_header;
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  const auto write_row = [&](const std::string& label, const std::vector<double>& values) {
    out << label;
    for (double v : values) out << ',' << format_value(v);
    out << '\n';
  };
  for (const auto& [label, values] : table.rows) write_row(label, values);
  if (table.summary && !table.rows.empty()) {
    write_row("Average", table.average());
    write_row("Total", table.total());
  }
}

inline Json table_to_json(const ReportTable& table) {
  const auto row_json = [&](const std::string& label, const std::vector<double>& values) {
    Json r = Json::object();
    r[table.row_header] = label;
    for (std::size_t i = 0; i < values.size(); ++i) r[table.columns[i]] = values[i];
    return r;
  };
  Json rows = Json::array();
  for (const auto& [label, values] : table.rows) rows.push_back(row_json(label, values));
  Json j{{"title", table.title}, {"columns", table.columns}, {"rows", rows}};
  if (table.summary && !table.rows.empty()) {
    j["average"] = row_json("Average", table.average());
    j["total"] = row_json("Total", table.total());
  }
  return j;
}

inline void write_json(std::ostream& out, const ReportHeader& header, const ReportTable& table,
                       const Json& extra = Json::object()) {
  Json j{{"header", header.to_json()}, {"table", table_to_json(table)}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  out << j.dump(2) << '\n';
}

// Reads one named column of a CSV report, skipping comment lines and the
// Average/Total summary rows.
inline std::vector<double> read_csv_column(std::istream& in, std::string_view column) {
  std::string line;
  std::vector<std::string> header;
  std::optional<std::size_t> idx;
  std::vector<double> out;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line);
    if (!idx) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == column) idx = i;
      }
      if (!idx) throw DataError("CSV has no column '" + std::string(column) + "'");
      continue;
    }
    if (cells.empty() || cells[0] == "Average" || cells[0] == "Total") continue;
    if (*idx >= cells.size()) throw DataError("short CSV row: '" + line + "'");
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cells[*idx], &used));
      if (used != cells[*idx].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw DataError("not a number in column '" + std::string(column) + "': '" + cells[*idx] + "'");
    }
  }
  if (!idx) throw DataError("CSV has no header row");
  return out;
}

inline std::vector<double> read_csv_column(const std::string& path, std::string_view column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv_column(in, column);
}

}  // namespace traitforge
