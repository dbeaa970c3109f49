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
#include <fstream>

#include "commands.hpp"
#include "gaborlens/error.hpp"
#include "gaborlens/eval.hpp"
#include "gaborlens/log.hpp"

namespace gaborlens::cli {

namespace {

std::vector<std::string> str_list(const json& cfg, const std::string& key,
                                  std::vector<std::string> fallback) {
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array())
    throw ConfigError("evaluate: \"" + key +
                      "\" must be a string or an array of strings");
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string())
      throw ConfigError("evaluate: \"" + key + "\" entries must be strings");
    out.push_back(e.get<std::string>());
  }
  if (out.empty())
    throw ConfigError("evaluate: \"" + key + "\" must not be empty");
  return out;
}

// File-name tag for one grid cell, e.g. j1_a0p5_conv1d2d_lstm_adam.
std::string cell_tag(int j, double alpha, const std::string& arch,
                     const std::string& opt) {
  std::string a = CsvWriter::num(alpha);
  for (char& ch : a)
    if (ch == '.') ch = 'p';
  return "j" + std::to_string(j) + "_a" + a + "_" + arch + "_" + opt;
}

json summary_json(const MetricSummary& s) {
  return json{{"mean", s.mean}, {"std", s.stddev}};
}

json metrics_json(const EvalMetrics& m) {
  json per_class = json::array();
  for (std::size_t k = 0; k < m.per_class.size(); ++k) {
    const ClassMetrics& c = m.per_class[k];
    per_class.push_back(
        {{"class", to_string(static_cast<ClassLabel>(k))},
         {"precision", c.precision},
         {"precision_defined", c.precision_defined},
         {"recall", c.recall},
         {"recall_defined", c.recall_defined},
         {"specificity", c.specificity},
         {"specificity_defined", c.specificity_defined},
         {"f1", c.f1},
         {"f1_defined", c.f1_defined},
         {"support", c.support}});
  }
  json confusion = json::array();
  for (int t = 0; t < m.confusion.n_classes; ++t) {
    json row = json::array();
    for (int p = 0; p < m.confusion.n_classes; ++p)
      row.push_back(m.confusion.at(t, p));
    confusion.push_back(row);
  }
  return json{{"accuracy", m.accuracy},
              {"macro_precision", m.macro_precision},
              {"macro_recall", m.macro_recall},
              {"macro_specificity", m.macro_specificity},
              {"macro_f1", m.macro_f1},
              {"confusion", confusion},
              {"per_class", per_class}};
}

}  // namespace

// Runs a (feature set x architecture x optimizer) grid of repeated
// train/test evaluations and writes the accuracy curve plus one report
// per cell. All cells share the root seed, hence identical splits —
// differences between cells come from the model, not the data.
void cmd_evaluate(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError("evaluate: --config is required (needs \"features\")");
  const json cfg = load_json_file(g.config_path);
  check_keys(cfg,
             {"seed", "workers", "features", "architectures", "optimizers",
              "n_runs", "train_fraction", "stratified", "train"},
             "evaluate config");

  const std::uint64_t seed = resolve_seed(g, cfg);
  const int workers = resolve_workers(g, cfg);
  if (!cfg.contains("features"))
    throw ConfigError(
        "evaluate: \"features\" is required (directory or list of them)");
  const std::vector<std::string> feature_dirs = str_list(cfg, "features", {});
  const std::vector<std::string> arch_names =
      str_list(cfg, "architectures", {"conv1d2d_lstm"});
  const std::vector<std::string> opt_names =
      str_list(cfg, "optimizers", {"adam"});
  const int n_runs = static_cast<int>(int_or(cfg, "n_runs", 10));
  const double train_fraction = num_or(cfg, "train_fraction", 0.675);
  const bool stratified = bool_or(cfg, "stratified", true);
  if (n_runs < 1) throw ConfigError("evaluate: n_runs must be at least 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError(
        "evaluate: train_fraction must lie strictly between 0 and 1");

  json train_cfg = json::object();
  if (cfg.contains("train")) {
    train_cfg = cfg.at("train");
    if (!train_cfg.is_object())
      throw ConfigError("evaluate: \"train\" must be an object");
    check_keys(train_cfg,
               {"learning_rate", "momentum", "beta1", "beta2", "epsilon",
                "batch_size", "max_epochs"},
               "evaluate train block");
  }
  TrainConfig base;
  base.learning_rate = num_or(train_cfg, "learning_rate", 0.0);
  base.momentum = num_or(train_cfg, "momentum", base.momentum);
  base.adam_beta1 = num_or(train_cfg, "beta1", base.adam_beta1);
  base.adam_beta2 = num_or(train_cfg, "beta2", base.adam_beta2);
  base.adam_epsilon = num_or(train_cfg, "epsilon", base.adam_epsilon);
  base.batch_size =
      static_cast<int>(int_or(train_cfg, "batch_size", base.batch_size));
  base.max_epochs =
      static_cast<int>(int_or(train_cfg, "max_epochs", base.max_epochs));
  base.threads = workers;

  json effective{{"seed", seed},
                 {"features", feature_dirs},
                 {"architectures", arch_names},
                 {"optimizers", opt_names},
                 {"n_runs", n_runs},
                 {"train_fraction", train_fraction},
                 {"stratified", stratified},
                 {"train",
                  {{"learning_rate", base.learning_rate},
                   {"momentum", base.momentum},
                   {"beta1", base.adam_beta1},
                   {"beta2", base.adam_beta2},
                   {"epsilon", base.adam_epsilon},
                   {"batch_size", base.batch_size},
                   {"max_epochs", base.max_epochs}}}};
  const CsvMeta meta = make_meta("evaluate", effective, seed);
  const auto out = ensure_out_dir(g.out_dir);

  CsvWriter curve((out / "accuracy_curve.csv").string(), meta,
                  {"j", "beta", "alpha", "architecture", "optimizer", "runs",
                   "mean_accuracy", "std_accuracy", "mean_macro_f1",
                   "std_macro_f1"});

  for (const std::string& dir : feature_dirs) {
    const FeatureSet set = load_feature_set(dir);
    const double beta = std::pow(2.0, set.j);
    for (const std::string& arch_name : arch_names) {
      const Architecture arch = parse_architecture(arch_name);
      const NetworkSpec spec = make_spec(arch, set.j, set.n_exponent);
      for (const std::string& opt_name : opt_names) {
        TrainConfig tc = base;
        tc.optimizer = parse_optimizer(opt_name);
        const RepeatedEvalReport report = repeated_eval(
            set.examples, spec, tc, n_runs, train_fraction, seed, stratified);
        const std::string tag = cell_tag(set.j, set.alpha, arch_name, opt_name);

        curve.row({CsvWriter::num(set.j), CsvWriter::num(beta),
                   CsvWriter::num(set.alpha), arch_name, opt_name,
                   CsvWriter::num(report.runs),
                   CsvWriter::num(report.accuracy.mean),
                   CsvWriter::num(report.accuracy.stddev),
                   CsvWriter::num(report.macro_f1.mean),
                   CsvWriter::num(report.macro_f1.stddev)});

        CsvWriter runs((out / ("runs_" + tag + ".csv")).string(), meta,
                       {"run", "accuracy", "macro_precision", "macro_recall",
                        "macro_specificity", "macro_f1"});
        for (std::size_t r = 0; r < report.run_metrics.size(); ++r) {
          const EvalMetrics& m = report.run_metrics[r];
          runs.row({CsvWriter::num(static_cast<long>(r)),
                    CsvWriter::num(m.accuracy),
                    CsvWriter::num(m.macro_precision),
                    CsvWriter::num(m.macro_recall),
                    CsvWriter::num(m.macro_specificity),
                    CsvWriter::num(m.macro_f1)});
        }
        runs.close();

        CsvWriter per_class(
            (out / ("per_class_" + tag + ".csv")).string(), meta,
            {"class", "precision_mean", "precision_std", "recall_mean",
             "recall_std", "specificity_mean", "specificity_std", "f1_mean",
             "f1_std"});
        for (int k = 0; k < spec.n_classes; ++k) {
          const auto& pc = report.per_class[k];
          per_class.row({to_string(static_cast<ClassLabel>(k)),
                         CsvWriter::num(pc[0].mean), CsvWriter::num(pc[0].stddev),
                         CsvWriter::num(pc[1].mean), CsvWriter::num(pc[1].stddev),
                         CsvWriter::num(pc[2].mean), CsvWriter::num(pc[2].stddev),
                         CsvWriter::num(pc[3].mean), CsvWriter::num(pc[3].stddev)});
        }
        per_class.close();

        json run_detail = json::array();
        for (std::size_t r = 0; r < report.run_metrics.size(); ++r) {
          json entry = metrics_json(report.run_metrics[r]);
          entry["run"] = r;
          run_detail.push_back(std::move(entry));
        }
        const json report_json{
            {"tool_version", meta.tool_version},
            {"config_hash", meta.config_hash},
            {"seed", seed},
            {"j", set.j},
            {"beta", beta},
            {"alpha", set.alpha},
            {"n_exponent", set.n_exponent},
            {"transform", set.transform},
            {"architecture", arch_name},
            {"optimizer", opt_name},
            {"runs", report.runs},
            {"train_fraction", report.train_fraction},
            {"stratified", stratified},
            {"accuracy", summary_json(report.accuracy)},
            {"macro_precision", summary_json(report.macro_precision)},
            {"macro_recall", summary_json(report.macro_recall)},
            {"macro_specificity", summary_json(report.macro_specificity)},
            {"macro_f1", summary_json(report.macro_f1)},
            {"run_metrics", run_detail}};
        const std::string report_path =
            (out / ("report_" + tag + ".json")).string();
        std::ofstream rf(report_path, std::ios::binary);
        rf << report_json.dump(2) << '\n';
        if (!rf) throw IoError("cannot write " + report_path);

        log_info("evaluate: " + tag + " mean accuracy " +
                 CsvWriter::num(report.accuracy.mean) + "% over " +
                 std::to_string(report.runs) + " runs");
      }
    }
  }
  curve.close();
}

}  // namespace gaborlens::cli
