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

#ifndef GABORLENS_SIGNAL_STORE_HPP_
#define GABORLENS_SIGNAL_STORE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gaborlens/signal_prep.hpp"

namespace gaborlens {

// Binary batch of conditioned signals ("GLSS"): ids, optional labels,
// sample rates, and full-precision samples. Doubles round-trip exactly,
// so downstream fits see bit-identical inputs across save/load.
struct StoredSignal {
  std::string id;
  std::optional<ClassLabel> label;
  double sample_rate = 0.0;
  std::vector<double> samples;
};

void save_signal_store(const std::string& path,
                       const std::vector<StoredSignal>& signals);
std::vector<StoredSignal> load_signal_store(const std::string& path);

}  // namespace gaborlens

#endif  // GABORLENS_SIGNAL_STORE_HPP_
