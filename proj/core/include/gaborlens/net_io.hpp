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

#ifndef GABORLENS_NET_IO_HPP_
#define GABORLENS_NET_IO_HPP_

#include <string>

#include "gaborlens/net.hpp"

namespace gaborlens {

// Versioned binary training checkpoint ("GLCK"): the network shape, the
// parameter tensors as named blocks of little-endian 32-bit floats, the
// optimizer slots, and the training configuration — everything needed to
// resume a run. Values round-trip exactly once quantized to 32 bits, so
// save(load(save(x))) is byte-identical to save(x).
struct Checkpoint {
  ModelWeights weights;
  OptState opt;
  TrainConfig config;
  int epochs_done = 0;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace gaborlens

#endif  // GABORLENS_NET_IO_HPP_
