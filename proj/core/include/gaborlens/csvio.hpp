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

#ifndef GABORLENS_CSVIO_HPP_
#define GABORLENS_CSVIO_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaborlens/signal_prep.hpp"

namespace gaborlens {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t value);  // 16 lowercase hex digits

// Provenance comments stamped at the top of every CSV artifact:
//   # tool_version <v>
//   # config_hash <hex>
//   # seed <n>
// No timestamps — identical inputs must produce identical bytes.
struct CsvMeta {
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const CsvMeta& meta,
            const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);
  void close();  // throws IoError if the stream failed

  static std::string num(double v);   // shortest round-trippable-ish %.9g
  static std::string num(long v);
  static std::string num(int v) { return num(static_cast<long>(v)); }

 private:
  std::ofstream os_;
  std::string path_;
  std::size_t n_cols_ = 0;
  bool closed_ = false;
};

struct CsvContent {
  std::vector<std::string> comments;  // leading '#' lines, prefix stripped
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvContent read_csv(const std::string& path);

// Dataset manifest: one recording per row (id, path, label, length,
// sample_rate); label is empty for unlabeled recordings. Paths are
// resolved relative to the manifest's directory by the loaders.
struct ManifestEntry {
  std::string id;
  std::string path;
  std::optional<ClassLabel> label;
  long length = 0;
  double sample_rate = 0.0;
};

std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries,
                    const CsvMeta& meta);

}  // namespace gaborlens

#endif  // GABORLENS_CSVIO_HPP_
