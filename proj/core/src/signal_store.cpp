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

#include "gaborlens/signal_store.hpp"

#include <cstdint>
#include <fstream>

#include "gaborlens/error.hpp"

namespace gaborlens {
namespace {

constexpr char kMagic[4] = {'G', 'L', 'S', 'S'};
constexpr std::uint32_t kVersionTag = 1;

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw FormatError("signal store is truncated");
  return value;
}

}  // namespace

void save_signal_store(const std::string& path,
                       const std::vector<StoredSignal>& signals) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersionTag);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(signals.size()));
  for (const StoredSignal& s : signals) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(s.id.size()));
    os.write(s.id.data(), static_cast<std::streamsize>(s.id.size()));
    put<std::int32_t>(os, s.label ? static_cast<std::int32_t>(*s.label) : -1);
    put<double>(os, s.sample_rate);
    put<std::uint64_t>(os, s.samples.size());
    os.write(reinterpret_cast<const char*>(s.samples.data()),
             static_cast<std::streamsize>(s.samples.size() * sizeof(double)));
  }
  if (!os) throw IoError("failed writing signal store: " + path);
}

std::vector<StoredSignal> load_signal_store(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4))
    throw FormatError("not a signal store: " + path);
  if (get<std::uint32_t>(is) != kVersionTag)
    throw FormatError("unsupported signal store version");
  const std::uint32_t count = get<std::uint32_t>(is);
  std::vector<StoredSignal> signals;
  signals.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    StoredSignal s;
    const std::uint32_t id_len = get<std::uint32_t>(is);
    s.id.resize(id_len);
    is.read(s.id.data(), id_len);
    if (!is) throw FormatError("signal store is truncated");
    const std::int32_t label = get<std::int32_t>(is);
    if (label >= 0) {
      if (label >= kNumClasses)
        throw FormatError("signal store holds an unknown class label");
      s.label = static_cast<ClassLabel>(label);
    }
    s.sample_rate = get<double>(is);
    const std::uint64_t n = get<std::uint64_t>(is);
    s.samples.resize(n);
    is.read(reinterpret_cast<char*>(s.samples.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw FormatError("signal store is truncated");
    signals.push_back(std::move(s));
  }
  return signals;
}

}  // namespace gaborlens
