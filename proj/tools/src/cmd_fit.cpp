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

#include <fstream>

#include "commands.hpp"
#include "gaborlens/error.hpp"
#include "gaborlens/gabor.hpp"
#include "gaborlens/log.hpp"
#include "gaborlens/parallel.hpp"
#include "gaborlens/signal_store.hpp"

namespace gaborlens::cli {
namespace {

json coeffs_to_json(const Eigen::VectorXd& a) {
  const Eigen::Index m = a.size();
  Eigen::Index exact_nonzero = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (a[i] != 0.0) ++exact_nonzero;
  json out;
  out["length"] = m;
  if (exact_nonzero * 10 < m) {
    out["encoding"] = "sparse";
    json idx = json::array(), val = json::array();
    for (Eigen::Index i = 0; i < m; ++i)
      if (a[i] != 0.0) {
        idx.push_back(i);
        val.push_back(a[i]);
      }
    out["indices"] = std::move(idx);
    out["values"] = std::move(val);
  } else {
    out["encoding"] = "dense";
    json val = json::array();
    for (Eigen::Index i = 0; i < m; ++i) val.push_back(a[i]);
    out["values"] = std::move(val);
  }
  return out;
}

}  // namespace

// Sparse-codes every stored signal at one (j, alpha) cell: per-recording
// FitResult JSON files plus a flat diagnostics CSV.
void cmd_fit(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError("fit: --config is required (needs \"signals\", \"j\")");
  const json cfg = load_json_file(g.config_path);
  check_keys(cfg, {"seed", "workers", "signals", "j", "alpha", "enet"},
             "fit config");

  const std::uint64_t seed = resolve_seed(g, cfg);
  const int workers = resolve_workers(g, cfg);
  const std::string signals_path = require_str(cfg, "signals", "fit");
  const int j = static_cast<int>(int_or(cfg, "j", 0));
  const double alpha = num_or(cfg, "alpha", 1.0);
  if (j < 1) throw ConfigError("fit: key \"j\" (integer >= 1) is required");
  if (alpha < 0.0 || alpha > 1.0)
    throw ConfigError("fit: alpha must be in [0, 1]");
  const ElasticNetConfig ecfg = enet_from_json(cfg, "fit");

  json effective{{"seed", seed},       {"signals", signals_path},
                 {"j", j},             {"alpha", alpha},
                 {"enet", enet_to_json(ecfg)}};
  const CsvMeta meta = make_meta("fit", effective, seed);

  const auto signals = load_signal_store(signals_path);
  if (signals.empty()) throw PreconditionError("fit: signal store is empty");
  const std::size_t len = signals[0].samples.size();
  if (!is_power_of_two(len))
    throw PreconditionError("fit: signal length is not a power of two");
  int n_exponent = 0;
  while ((std::size_t{1} << n_exponent) < len) ++n_exponent;
  for (const StoredSignal& s : signals)
    if (s.samples.size() != len)
      throw PreconditionError("fit: signals have mixed lengths");
  if (j > n_exponent - 1)
    throw ConfigError("fit: j=" + std::to_string(j) +
                      " is out of range for N=" + std::to_string(n_exponent));

  const auto out = ensure_out_dir(g.out_dir);
  std::filesystem::create_directories(out / "fits");

  const GaborDictionary dict = GaborDictionary::build(j, n_exponent, true);
  const ElasticNet enet(dict, ecfg);

  std::vector<FitResult> results(signals.size());
  parallel_for(signals.size(), workers, [&](std::size_t i) {
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
        signals[i].samples.data(),
        static_cast<Eigen::Index>(signals[i].samples.size()));
    results[i] = enet.fit(x, alpha);
  });

  CsvWriter stats((out / "fit_stats.csv").string(), meta,
                  {"id", "label", "j", "n_exponent", "alpha",
                   "lambda_selected", "n_nonzero", "residual_energy",
                   "coeff_energy", "iterations", "converged"});
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const StoredSignal& s = signals[i];
    const FitResult& r = results[i];

    json doc;
    doc["id"] = s.id;
    doc["label"] = s.label ? to_string(*s.label) : "";
    doc["j"] = j;
    doc["n_exponent"] = n_exponent;
    doc["alpha"] = alpha;
    doc["lambda_selected"] = r.lambda_selected;
    doc["n_nonzero"] = r.n_nonzero;
    doc["residual_energy"] = r.residual_energy;
    doc["coeff_energy"] = r.coeff_energy;
    doc["iterations"] = r.iterations;
    doc["converged"] = r.converged;
    doc["coeffs"] = coeffs_to_json(r.coeffs);
    json curve = json::array();
    for (const auto& [lambda, mse] : r.cv_mse_curve)
      curve.push_back(json::array({lambda, mse}));
    doc["cv_mse_curve"] = std::move(curve);

    std::ofstream os(out / "fits" / (s.id + ".json"));
    if (!os) throw IoError("cannot write fit result for " + s.id);
    os << doc.dump(2) << "\n";

    stats.row({s.id, s.label ? to_string(*s.label) : "", CsvWriter::num(j),
               CsvWriter::num(n_exponent), CsvWriter::num(alpha),
               CsvWriter::num(r.lambda_selected),
               CsvWriter::num(static_cast<long>(r.n_nonzero)),
               CsvWriter::num(r.residual_energy),
               CsvWriter::num(r.coeff_energy), CsvWriter::num(r.iterations),
               r.converged ? "1" : "0"});
  }
  stats.close();
  log_info("fit: wrote " + std::to_string(signals.size()) + " fits to " +
           out.string());
}

}  // namespace gaborlens::cli
