// Copyright 2026 The gaborlens authors
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

#include "gaborlens/csvio.hpp"

#include <cstdio>
#include <cstdlib>

#include "gaborlens/error.hpp"

namespace gaborlens {
namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quoted(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const CsvMeta& meta,
                     const std::vector<std::string>& columns)
    : os_(path, std::ios::trunc), path_(path), n_cols_(columns.size()) {
  if (!os_) throw IoError("cannot open for writing: " + path);
  if (columns.empty()) throw PreconditionError("CSV needs at least one column");
  os_ << "# tool_version " << meta.tool_version << "\n";
  os_ << "# config_hash " << meta.config_hash << "\n";
  os_ << "# seed " << meta.seed << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os_ << (i ? "," : "") << quoted(columns[i]);
  os_ << "\n";
}

CsvWriter::~CsvWriter() {
  if (!closed_) os_.flush();
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_)
    throw PreconditionError("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i)
    os_ << (i ? "," : "") << quoted(cells[i]);
  os_ << "\n";
}

void CsvWriter::close() {
  os_.flush();
  if (!os_) throw IoError("failed writing: " + path_);
  os_.close();
  closed_ = true;
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string CsvWriter::num(long v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%ld", v);
  return buf;
}

CsvContent read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  CsvContent out;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    line = strip_cr(line);
    if (!header_seen && !line.empty() && line[0] == '#') {
      std::size_t start = 1;
      while (start < line.size() && line[start] == ' ') ++start;
      out.comments.push_back(line.substr(start));
      continue;
    }
    if (line.empty()) continue;
    if (!header_seen) {
      out.header = split_csv_line(line);
      header_seen = true;
    } else {
      out.rows.push_back(split_csv_line(line));
    }
  }
  if (!header_seen) throw FormatError("CSV has no header row: " + path);
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  const CsvContent csv = read_csv(path);
  const std::vector<std::string> expected = {"id", "path", "label", "length",
                                             "sample_rate"};
  if (csv.header != expected)
    throw FormatError("manifest header must be id,path,label,length,sample_rate");
  std::vector<ManifestEntry> entries;
  entries.reserve(csv.rows.size());
  for (const auto& row : csv.rows) {
    if (row.size() != expected.size())
      throw FormatError("manifest row width does not match the header");
    ManifestEntry e;
    e.id = row[0];
    e.path = row[1];
    if (!row[2].empty()) e.label = parse_class_label(row[2]);
    char* end = nullptr;
    e.length = std::strtol(row[3].c_str(), &end, 10);
    if (end == row[3].c_str() || *end != '\0' || e.length < 0)
      throw FormatError("bad manifest length: " + row[3]);
    e.sample_rate = std::strtod(row[4].c_str(), &end);
    if (end == row[4].c_str() || *end != '\0' || e.sample_rate <= 0)
      throw FormatError("bad manifest sample_rate: " + row[4]);
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries,
                    const CsvMeta& meta) {
  CsvWriter w(path, meta, {"id", "path", "label", "length", "sample_rate"});
  for (const ManifestEntry& e : entries) {
    w.row({e.id, e.path, e.label ? to_string(*e.label) : "",
           CsvWriter::num(e.length), CsvWriter::num(e.sample_rate)});
  }
  w.close();
}

}  // namespace gaborlens
