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

#include "commands.hpp"
#include "gaborlens/error.hpp"
#include "gaborlens/log.hpp"
#include "gaborlens/signal_store.hpp"
#include "gaborlens/wav.hpp"

namespace gaborlens::cli {

// Conditions every manifest entry (clip/pad -> antialiased decimation ->
// standardize) into a binary signal store. Per-file failures are logged and
// skipped; any failure makes the whole command exit as a partial failure.
void cmd_preprocess(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError("preprocess: --config is required (needs \"manifest\")");
  const json cfg = load_json_file(g.config_path);
  check_keys(cfg,
             {"seed", "workers", "manifest", "n_exponent",
              "downsample_factor", "antialias"},
             "preprocess config");

  const std::uint64_t seed = resolve_seed(g, cfg);
  const std::string manifest_path = require_str(cfg, "manifest", "preprocess");
  const int n_exponent = static_cast<int>(int_or(cfg, "n_exponent", 11));
  const int factor = static_cast<int>(int_or(cfg, "downsample_factor", 8));
  const bool antialias = bool_or(cfg, "antialias", true);
  if (n_exponent < 3 || n_exponent > 20)
    throw ConfigError("n_exponent must be in [3, 20]");

  PreprocessConfig pc;
  pc.raw_len = (std::size_t{1} << n_exponent) * static_cast<std::size_t>(factor);
  pc.downsample_factor = factor;
  pc.antialias = antialias;

  json effective{{"seed", seed},
                 {"manifest", manifest_path},
                 {"n_exponent", n_exponent},
                 {"downsample_factor", factor},
                 {"antialias", antialias}};
  const CsvMeta meta = make_meta("preprocess", effective, seed);

  const auto out = ensure_out_dir(g.out_dir);
  const auto entries = read_manifest(manifest_path);
  const auto base = std::filesystem::path(manifest_path).parent_path();

  std::vector<StoredSignal> store;
  std::vector<ManifestEntry> updated;
  long failed = 0;
  for (const ManifestEntry& e : entries) {
    try {
      Recording rec = load_wav(base / e.path);
      rec.id = e.id;
      rec.label = e.label;
      const Recording conditioned = preprocess(rec, pc);
      StoredSignal s;
      s.id = e.id;
      s.label = e.label;
      s.sample_rate = conditioned.sample_rate;
      s.samples = conditioned.samples;
      store.push_back(std::move(s));
      ManifestEntry u = e;
      u.length = static_cast<long>(conditioned.samples.size());
      u.sample_rate = conditioned.sample_rate;
      updated.push_back(std::move(u));
    } catch (const std::exception& ex) {
      ++failed;
      log_error("preprocess: " + e.id + ": " + ex.what());
    }
  }

  save_signal_store((out / "signals.glss").string(), store);
  write_manifest((out / "preprocessed.csv").string(), updated, meta);
  log_info("preprocess: conditioned " + std::to_string(store.size()) + " of " +
           std::to_string(entries.size()) + " recordings");
  if (failed > 0)
    throw PartialFailure("preprocess: " + std::to_string(failed) + " of " +
                         std::to_string(entries.size()) +
                         " recordings failed");
}

}  // namespace gaborlens::cli
