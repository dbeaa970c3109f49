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
#include "gaborlens/net_io.hpp"

namespace gaborlens::cli {

// Trains one classifier on a feature set; writes the checkpoint (weights +
// optimizer state) and the per-epoch history table.
void cmd_train(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError("train: --config is required (needs \"features\")");
  const json cfg = load_json_file(g.config_path);
  check_keys(cfg,
             {"seed", "workers", "features", "architecture", "optimizer",
              "learning_rate", "momentum", "beta1", "beta2", "epsilon",
              "batch_size", "max_epochs", "j", "n_exponent", "resume"},
             "train config");

  const std::uint64_t seed = resolve_seed(g, cfg);
  const int workers = resolve_workers(g, cfg);
  const std::string features_dir = require_str(cfg, "features", "train");
  const std::string arch_name = str_or(cfg, "architecture", "conv1d2d_lstm");
  const std::string opt_name = str_or(cfg, "optimizer", "adam");
  const Architecture arch = parse_architecture(arch_name);

  TrainConfig tc;
  tc.optimizer = parse_optimizer(opt_name);
  tc.learning_rate = num_or(cfg, "learning_rate", 0.0);
  tc.momentum = num_or(cfg, "momentum", tc.momentum);
  tc.adam_beta1 = num_or(cfg, "beta1", tc.adam_beta1);
  tc.adam_beta2 = num_or(cfg, "beta2", tc.adam_beta2);
  tc.adam_epsilon = num_or(cfg, "epsilon", tc.adam_epsilon);
  tc.batch_size = static_cast<int>(int_or(cfg, "batch_size", tc.batch_size));
  tc.max_epochs = static_cast<int>(int_or(cfg, "max_epochs", tc.max_epochs));
  tc.seed = seed;
  tc.threads = workers;
  const std::string resume_path = str_or(cfg, "resume", "");

  json effective{{"seed", seed},
                 {"features", features_dir},
                 {"architecture", arch_name},
                 {"optimizer", opt_name},
                 {"learning_rate", tc.learning_rate},
                 {"momentum", tc.momentum},
                 {"beta1", tc.adam_beta1},
                 {"beta2", tc.adam_beta2},
                 {"epsilon", tc.adam_epsilon},
                 {"batch_size", tc.batch_size},
                 {"max_epochs", tc.max_epochs},
                 {"resume", resume_path}};
  const CsvMeta meta = make_meta("train", effective, seed);

  const FeatureSet set = load_feature_set(features_dir);
  // Optional cross-checks against the upstream artifact's geometry.
  if (cfg.contains("j") && int_or(cfg, "j", 0) != set.j)
    throw ConfigError("train: config requests j=" +
                      std::to_string(int_or(cfg, "j", 0)) +
                      " but the features were built at j=" +
                      std::to_string(set.j));
  if (cfg.contains("n_exponent") &&
      int_or(cfg, "n_exponent", 0) != set.n_exponent)
    throw ConfigError("train: config requests N=" +
                      std::to_string(int_or(cfg, "n_exponent", 0)) +
                      " but the features were built at N=" +
                      std::to_string(set.n_exponent));

  const NetworkSpec spec = make_spec(arch, set.j, set.n_exponent);

  TrainOutput result;
  int epochs_done = 0;
  if (!resume_path.empty()) {
    Checkpoint ck = load_checkpoint(resume_path);
    if (ck.weights.spec.j != spec.j ||
        ck.weights.spec.n_exponent != spec.n_exponent ||
        ck.weights.spec.architecture != spec.architecture)
      throw ConfigError("train: checkpoint " + resume_path +
                        " was trained with a different network shape");
    TrainConfig rc = tc;
    rc.max_epochs = tc.max_epochs - ck.epochs_done;
    if (rc.max_epochs < 0) rc.max_epochs = 0;
    result = train(set.examples, spec, rc, &ck.weights, &ck.opt);
    epochs_done = ck.epochs_done + rc.max_epochs;
    for (EpochStats& e : result.history) e.epoch += ck.epochs_done;
  } else {
    result = train(set.examples, spec, tc);
    epochs_done = tc.max_epochs;
  }

  const auto out = ensure_out_dir(g.out_dir);
  Checkpoint ck;
  ck.weights = std::move(result.weights);
  ck.opt = std::move(result.opt);
  ck.config = tc;
  ck.epochs_done = epochs_done;
  save_checkpoint((out / "checkpoint.glck").string(), ck);

  CsvWriter history((out / "history.csv").string(), meta,
                    {"epoch", "loss", "train_accuracy", "wall_ms"});
  for (const EpochStats& e : result.history)
    history.row({CsvWriter::num(e.epoch), CsvWriter::num(e.loss),
                 CsvWriter::num(e.train_accuracy), CsvWriter::num(e.wall_ms)});
  history.close();

  if (!result.history.empty()) {
    const EpochStats& last = result.history.back();
    log_info("train: epoch " + std::to_string(last.epoch) + " loss " +
             CsvWriter::num(last.loss) + " accuracy " +
             CsvWriter::num(last.train_accuracy) + "%");
  }
}

}  // namespace gaborlens::cli
