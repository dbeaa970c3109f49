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

#include <cmath>

#include "commands.hpp"
#include "gaborlens/error.hpp"
#include "gaborlens/log.hpp"
#include "gaborlens/signal_store.hpp"
#include "gaborlens/sweep.hpp"

namespace gaborlens::cli {

// Runs the (j, alpha) diagnostics grid over a signal store and emits the
// long-format aggregate table plus the per-fit rows behind it.
void cmd_sweep(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError(
        "sweep: --config is required (needs \"signals\", \"j_values\", "
        "\"alpha_values\")");
  const json cfg = load_json_file(g.config_path);
  check_keys(cfg,
             {"seed", "workers", "signals", "j_values", "alpha_values",
              "enet"},
             "sweep config");

  const std::uint64_t seed = resolve_seed(g, cfg);
  const int workers = resolve_workers(g, cfg);
  const std::string signals_path = require_str(cfg, "signals", "sweep");
  if (!cfg.contains("j_values") || !cfg.at("j_values").is_array() ||
      cfg.at("j_values").empty())
    throw ConfigError("sweep: key \"j_values\" (non-empty array) is required");
  if (!cfg.contains("alpha_values") || !cfg.at("alpha_values").is_array() ||
      cfg.at("alpha_values").empty())
    throw ConfigError(
        "sweep: key \"alpha_values\" (non-empty array) is required");
  std::vector<int> j_values;
  for (const json& v : cfg.at("j_values")) {
    if (!v.is_number_integer())
      throw ConfigError("sweep: j_values must be integers");
    j_values.push_back(v.get<int>());
  }
  std::vector<double> alpha_values;
  for (const json& v : cfg.at("alpha_values")) {
    if (!v.is_number()) throw ConfigError("sweep: alpha_values must be numbers");
    alpha_values.push_back(v.get<double>());
  }
  const ElasticNetConfig ecfg = enet_from_json(cfg, "sweep");

  json effective{{"seed", seed},
                 {"signals", signals_path},
                 {"j_values", j_values},
                 {"alpha_values", alpha_values},
                 {"enet", enet_to_json(ecfg)}};
  const CsvMeta meta = make_meta("sweep", effective, seed);

  const auto signals = load_signal_store(signals_path);
  if (signals.empty()) throw PreconditionError("sweep: signal store is empty");
  const std::size_t len = signals[0].samples.size();
  if (!is_power_of_two(len))
    throw PreconditionError("sweep: signal length is not a power of two");
  int n_exponent = 0;
  while ((std::size_t{1} << n_exponent) < len) ++n_exponent;

  std::vector<Recording> recordings;
  recordings.reserve(signals.size());
  for (const StoredSignal& s : signals) {
    Recording r;
    r.id = s.id;
    r.samples = s.samples;
    r.sample_rate = s.sample_rate;
    r.label = s.label;
    recordings.push_back(std::move(r));
  }

  const DiagnosticsTable table =
      sweep(recordings, j_values, alpha_values, n_exponent, ecfg, workers);

  const auto out = ensure_out_dir(g.out_dir);
  CsvWriter diag((out / "diagnostics.csv").string(), meta,
                 {"j", "beta", "alpha", "class", "mean_residual_energy",
                  "mean_coeff_energy", "mean_nonzero", "std_nonzero",
                  "n_fits"});
  for (const DiagnosticsRow& r : table.rows) {
    diag.row({CsvWriter::num(r.j), CsvWriter::num(r.beta),
              CsvWriter::num(r.alpha), r.class_name,
              CsvWriter::num(r.mean_residual_energy),
              CsvWriter::num(r.mean_coeff_energy),
              CsvWriter::num(r.mean_nonzero), CsvWriter::num(r.std_nonzero),
              CsvWriter::num(r.n_fits)});
  }
  diag.close();

  CsvWriter fits((out / "fits.csv").string(), meta,
                 {"j", "beta", "alpha", "id", "label", "lambda_selected",
                  "residual_energy", "coeff_energy", "n_nonzero"});
  for (const SweepFit& f : table.fits) {
    fits.row({CsvWriter::num(f.j), CsvWriter::num(std::pow(2.0, f.j)),
              CsvWriter::num(f.alpha), recordings[f.recording_index].id,
              to_string(f.label), CsvWriter::num(f.lambda_selected),
              CsvWriter::num(f.residual_energy),
              CsvWriter::num(f.coeff_energy),
              CsvWriter::num(static_cast<long>(f.n_nonzero))});
  }
  fits.close();
  log_info("sweep: " + std::to_string(table.fits.size()) + " fits across " +
           std::to_string(table.rows.size()) + " aggregate rows");
}

}  // namespace gaborlens::cli
