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

#include "gaborlens/net_io.hpp"

#include <cstdint>
#include <fstream>
#include <vector>

#include "gaborlens/error.hpp"

namespace gaborlens {
namespace {

constexpr char kMagic[4] = {'G', 'L', 'C', 'K'};
constexpr std::uint32_t kVersionTag = 1;

static_assert(sizeof(float) == 4, "checkpoint payloads are 32-bit floats");

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw FormatError("checkpoint file is truncated");
  return value;
}

void put_f32_vector(std::ostream& os, const std::vector<double>& v) {
  put<std::uint64_t>(os, v.size());
  for (double x : v) put<float>(os, static_cast<float>(x));
}

void get_f32_vector(std::istream& is, std::vector<double>& v,
                    std::size_t expected) {
  const std::uint64_t count = get<std::uint64_t>(is);
  if (count != expected)
    throw FormatError("checkpoint tensor size does not match its shape");
  v.resize(count);
  for (std::uint64_t i = 0; i < count; ++i)
    v[i] = static_cast<double>(get<float>(is));
}

void put_geom(std::ostream& os, const ConvGeom& g) {
  put<std::int32_t>(os, g.in_channels);
  put<std::int32_t>(os, g.in_h);
  put<std::int32_t>(os, g.in_w);
  put<std::int32_t>(os, g.filter_h);
  put<std::int32_t>(os, g.filter_w);
  put<std::int32_t>(os, g.stride_h);
  put<std::int32_t>(os, g.stride_w);
  put<std::int32_t>(os, g.n_filters);
  put<std::int32_t>(os, g.out_h);
  put<std::int32_t>(os, g.out_w);
}

ConvGeom get_geom(std::istream& is) {
  ConvGeom g;
  g.in_channels = get<std::int32_t>(is);
  g.in_h = get<std::int32_t>(is);
  g.in_w = get<std::int32_t>(is);
  g.filter_h = get<std::int32_t>(is);
  g.filter_w = get<std::int32_t>(is);
  g.stride_h = get<std::int32_t>(is);
  g.stride_w = get<std::int32_t>(is);
  g.n_filters = get<std::int32_t>(is);
  g.out_h = get<std::int32_t>(is);
  g.out_w = get<std::int32_t>(is);
  return g;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);

  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersionTag);

  const NetworkSpec& s = ck.weights.spec;
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.architecture));
  put<std::int32_t>(os, s.j);
  put<std::int32_t>(os, s.n_exponent);
  put<std::int32_t>(os, s.input_h);
  put<std::int32_t>(os, s.input_w);
  put_geom(os, s.conv1);
  put_geom(os, s.conv2);
  put<std::int32_t>(os, s.seq_len);
  put<std::int32_t>(os, s.feature_dim);
  put<std::int32_t>(os, s.lstm_units);
  put<std::int32_t>(os, s.n_classes);

  const TrainConfig& c = ck.config;
  put<std::uint32_t>(os, static_cast<std::uint32_t>(c.optimizer));
  put<double>(os, c.learning_rate);
  put<double>(os, c.momentum);
  put<double>(os, c.adam_beta1);
  put<double>(os, c.adam_beta2);
  put<double>(os, c.adam_epsilon);
  put<std::int32_t>(os, c.batch_size);
  put<std::int32_t>(os, c.max_epochs);
  put<std::uint64_t>(os, c.seed);

  put<std::int32_t>(os, ck.epochs_done);
  put<std::int64_t>(os, static_cast<std::int64_t>(ck.opt.step));

  ModelWeights w = ck.weights;  // param_blocks needs mutable access
  auto blocks = param_blocks(w);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(blocks.size()));
  for (const auto& blk : blocks) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(blk.name.size()));
    os.write(blk.name.data(),
             static_cast<std::streamsize>(blk.name.size()));
    put_f32_vector(os, *blk.data);
  }
  const bool has_opt = ck.opt.slot1.size() == blocks.size() &&
                       ck.opt.slot2.size() == blocks.size();
  put<std::uint32_t>(os, has_opt ? 1u : 0u);
  if (has_opt) {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      put_f32_vector(os, ck.opt.slot1[b]);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      put_f32_vector(os, ck.opt.slot2[b]);
  }
  if (!os) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4))
    throw FormatError("not a checkpoint file: " + path);
  const std::uint32_t version = get<std::uint32_t>(is);
  if (version != kVersionTag)
    throw FormatError("unsupported checkpoint version");

  NetworkSpec s;
  s.architecture = static_cast<Architecture>(get<std::uint32_t>(is));
  if (s.architecture != Architecture::kConv1dLstm &&
      s.architecture != Architecture::kConv1d2dLstm)
    throw FormatError("unknown architecture tag in checkpoint");
  s.j = get<std::int32_t>(is);
  s.n_exponent = get<std::int32_t>(is);
  s.input_h = get<std::int32_t>(is);
  s.input_w = get<std::int32_t>(is);
  s.conv1 = get_geom(is);
  s.conv2 = get_geom(is);
  s.seq_len = get<std::int32_t>(is);
  s.feature_dim = get<std::int32_t>(is);
  s.lstm_units = get<std::int32_t>(is);
  s.n_classes = get<std::int32_t>(is);
  // Re-derive the output geometry; a corrupted shape fails here instead of
  // producing an inconsistent model.
  NetworkSpec derived = finalize_spec(s);
  if (derived.seq_len != s.seq_len || derived.feature_dim != s.feature_dim)
    throw FormatError("checkpoint shape fields are inconsistent");

  Checkpoint ck;
  ck.config.optimizer = static_cast<Optimizer>(get<std::uint32_t>(is));
  ck.config.learning_rate = get<double>(is);
  ck.config.momentum = get<double>(is);
  ck.config.adam_beta1 = get<double>(is);
  ck.config.adam_beta2 = get<double>(is);
  ck.config.adam_epsilon = get<double>(is);
  ck.config.batch_size = get<std::int32_t>(is);
  ck.config.max_epochs = get<std::int32_t>(is);
  ck.config.seed = get<std::uint64_t>(is);
  ck.epochs_done = get<std::int32_t>(is);
  const std::int64_t opt_step = get<std::int64_t>(is);

  ck.weights = init_weights(derived, 0);  // allocates the right shapes
  auto blocks = param_blocks(ck.weights);
  const std::uint32_t n_blocks = get<std::uint32_t>(is);
  if (n_blocks != blocks.size())
    throw FormatError("checkpoint block count does not match the architecture");
  for (auto& blk : blocks) {
    const std::uint32_t len = get<std::uint32_t>(is);
    std::string name(len, '\0');
    is.read(name.data(), len);
    if (!is) throw FormatError("checkpoint file is truncated");
    if (name != blk.name)
      throw FormatError("unexpected checkpoint block: " + name);
    get_f32_vector(is, *blk.data, blk.data->size());
  }
  ck.opt.step = opt_step;
  const std::uint32_t has_opt = get<std::uint32_t>(is);
  ck.opt.slot1.resize(blocks.size());
  ck.opt.slot2.resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    ck.opt.slot1[b].assign(blocks[b].data->size(), 0.0);
    ck.opt.slot2[b].assign(blocks[b].data->size(), 0.0);
  }
  if (has_opt) {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      get_f32_vector(is, ck.opt.slot1[b], blocks[b].data->size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
      get_f32_vector(is, ck.opt.slot2[b], blocks[b].data->size());
  }
  return ck;
}

}  // namespace gaborlens
