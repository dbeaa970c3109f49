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

#ifndef GABORLENS_TOOLS_COMMANDS_HPP_
#define GABORLENS_TOOLS_COMMANDS_HPP_

#include "cli_common.hpp"

namespace gaborlens::cli {

void cmd_synth(const GlobalOpts& g);
void cmd_preprocess(const GlobalOpts& g);
void cmd_fit(const GlobalOpts& g);
void cmd_featurize(const GlobalOpts& g);
void cmd_sweep(const GlobalOpts& g);
void cmd_train(const GlobalOpts& g);
void cmd_evaluate(const GlobalOpts& g);

}  // namespace gaborlens::cli

#endif  // GABORLENS_TOOLS_COMMANDS_HPP_
