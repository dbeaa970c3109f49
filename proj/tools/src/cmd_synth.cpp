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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "gaborlens/error.hpp"
#include "gaborlens/log.hpp"
#include "gaborlens/rng.hpp"
#include "gaborlens/synth.hpp"
#include "gaborlens/wav.hpp"

namespace gaborlens::cli {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

// Generates n_per_class labeled recordings per condition as PCM16 WAV files
// plus a manifest. Raw length varies around 2^n_exponent * downsample_factor
// so the conditioning stage exercises both clipping and padding.
void cmd_synth(const GlobalOpts& g) {
  const json cfg = g.config_path.empty() ? json::object()
                                         : load_json_file(g.config_path);
  check_keys(cfg,
             {"seed", "workers", "n_per_class", "n_exponent",
              "downsample_factor", "sample_rate"},
             "synth config");

  const std::uint64_t seed = resolve_seed(g, cfg);
  const long n_per_class = int_or(cfg, "n_per_class", 10);
  const int n_exponent = static_cast<int>(int_or(cfg, "n_exponent", 11));
  const int factor = static_cast<int>(int_or(cfg, "downsample_factor", 8));
  const double rate = num_or(cfg, "sample_rate", 8000.0);
  if (n_per_class < 0) throw ConfigError("n_per_class must be >= 0");
  if (n_exponent < 3 || n_exponent > 20)
    throw ConfigError("n_exponent must be in [3, 20]");
  if (factor < 1) throw ConfigError("downsample_factor must be >= 1");
  if (!(rate > 0.0)) throw ConfigError("sample_rate must be positive");

  json effective{{"seed", seed},
                 {"n_per_class", n_per_class},
                 {"n_exponent", n_exponent},
                 {"downsample_factor", factor},
                 {"sample_rate", rate}};
  const CsvMeta meta = make_meta("synth", effective, seed);

  const auto out = ensure_out_dir(g.out_dir);
  std::filesystem::create_directories(out / "wav");

  const std::size_t raw_len =
      (std::size_t{1} << n_exponent) * static_cast<std::size_t>(factor);
  const std::size_t cycle_len = raw_len / 2;

  std::vector<ManifestEntry> entries;
  for (int k = 0; k < kNumClasses; ++k) {
    const ClassLabel label = static_cast<ClassLabel>(k);
    for (long i = 0; i < n_per_class; ++i) {
      Recording rec = synth_pcg_at(
          label, 2 * raw_len, cycle_len, rate,
          derive_seed(seed, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(i)));
      // Seeded raw length in [0.85, 1.15] * raw_len: some recordings get
      // clipped downstream, others padded.
      Rng len_rng(derive_seed(seed, 0x7e57,
                              static_cast<std::uint64_t>(k) * 100003 +
                                  static_cast<std::uint64_t>(i)));
      const auto target = static_cast<std::size_t>(std::lround(
          static_cast<double>(raw_len) * len_rng.uniform(0.85, 1.15)));
      rec.samples.resize(std::min(target, rec.samples.size()));

      double peak = 0.0;
      for (double v : rec.samples) peak = std::max(peak, std::abs(v));
      if (peak > 0.0)
        for (double& v : rec.samples) v *= 0.98 / peak;

      char name[64];
      std::snprintf(name, sizeof(name), "%s_%03ld",
                    lower(to_string(label)).c_str(), i);
      const std::string rel = std::string("wav/") + name + ".wav";
      write_wav_pcm16(out / rel, rec.samples, rate);

      ManifestEntry e;
      e.id = name;
      e.path = rel;
      e.label = label;
      e.length = static_cast<long>(rec.samples.size());
      e.sample_rate = rate;
      entries.push_back(std::move(e));
    }
  }
  if (entries.empty()) log_warn("synth: n_per_class is 0, manifest is empty");
  write_manifest((out / "manifest.csv").string(), entries, meta);
  log_info("synth: wrote " + std::to_string(entries.size()) +
           " recordings to " + out.string());
}

}  // namespace gaborlens::cli
