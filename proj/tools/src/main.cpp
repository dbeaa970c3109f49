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

#include <memory>
#include <vector>

#include "CLI11.hpp"

#include "cli_common.hpp"
#include "commands.hpp"
#include "gaborlens/version.hpp"

namespace {

using gaborlens::cli::GlobalOpts;

struct CommandDef {
  const char* name;
  const char* help;
  void (*fn)(const GlobalOpts&);
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gaborlens: sparse time-frequency modeling and classification of "
      "heart-sound recordings"};
  app.set_version_flag("--version", std::string(gaborlens::kVersion));
  app.require_subcommand(1);

  const CommandDef defs[] = {
      {"synth", "Generate a labeled synthetic WAV dataset plus manifest",
       gaborlens::cli::cmd_synth},
      {"preprocess", "Clip/pad, decimate, and standardize recordings",
       gaborlens::cli::cmd_preprocess},
      {"fit", "Fit sparse atom coefficients to each stored signal",
       gaborlens::cli::cmd_fit},
      {"featurize", "Turn fitted coefficients into 2D feature matrices",
       gaborlens::cli::cmd_featurize},
      {"sweep", "Residual/sparsity diagnostics over a (j, alpha) grid",
       gaborlens::cli::cmd_sweep},
      {"train", "Train the CNN-LSTM classifier on one feature set",
       gaborlens::cli::cmd_train},
      {"evaluate", "Repeated train/test evaluation over a model grid",
       gaborlens::cli::cmd_evaluate},
  };

  int exit_code = 0;
  std::vector<std::unique_ptr<GlobalOpts>> opt_store;
  for (const CommandDef& def : defs) {
    CLI::App* sub = app.add_subcommand(def.name, def.help);
    opt_store.push_back(std::make_unique<GlobalOpts>());
    GlobalOpts* o = opt_store.back().get();
    sub->add_option("--config", o->config_path, "JSON configuration file");
    sub->add_option("--out", o->out_dir, "Output directory");
    CLI::Option* seed_opt =
        sub->add_option("--seed", o->seed, "Root seed (overrides config)");
    CLI::Option* workers_opt = sub->add_option(
        "--workers", o->workers, "Worker threads (overrides config)");
    void (*fn)(const GlobalOpts&) = def.fn;
    sub->callback([&exit_code, o, seed_opt, workers_opt, fn]() {
      o->seed_set = seed_opt->count() > 0;
      o->workers_set = workers_opt->count() > 0;
      exit_code = gaborlens::cli::run_command([o, fn]() { fn(*o); });
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // --help exits 0; bad usage is a validation error
  }
  return exit_code;
}
