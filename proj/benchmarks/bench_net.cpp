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

#include <benchmark/benchmark.h>

#include "gaborlens/net.hpp"
#include "gaborlens/rng.hpp"

namespace {

using namespace gaborlens;

FeatureMatrix random_features(const NetworkSpec& spec, std::uint64_t seed) {
  FeatureMatrix m;
  m.j = spec.j;
  m.n_exponent = spec.n_exponent;
  m.values.resize(spec.input_h, spec.input_w);
  Rng rng(seed);
  for (Eigen::Index r = 0; r < m.values.rows(); ++r)
    for (Eigen::Index c = 0; c < m.values.cols(); ++c)
      m.values(r, c) = rng.uniform(-1.0, 1.0);
  return m;
}

Dataset random_dataset(const NetworkSpec& spec, int per_class) {
  Dataset data;
  for (int k = 0; k < kNumClasses; ++k)
    for (int i = 0; i < per_class; ++i) {
      TrainExample ex;
      ex.input = random_features(
          spec, derive_seed(9, static_cast<std::uint64_t>(k),
                            static_cast<std::uint64_t>(i)));
      ex.label = static_cast<ClassLabel>(k);
      data.push_back(std::move(ex));
    }
  return data;
}

void BM_Predict(benchmark::State& state) {
  const auto arch = state.range(0) == 0 ? Architecture::kConv1dLstm
                                        : Architecture::kConv1d2dLstm;
  const NetworkSpec spec = make_spec(arch, 1, 9);
  const ModelWeights w = init_weights(spec, 1);
  const FeatureMatrix input = random_features(spec, 2);
  for (auto _ : state) benchmark::DoNotOptimize(predict(w, input));
}
BENCHMARK(BM_Predict)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

// One epoch over 25 examples: forward, backward, and an optimizer step per
// batch. j=1, N=9 matches the feature geometry used by the larger sweeps.
void BM_TrainEpoch(benchmark::State& state) {
  const auto arch = state.range(0) == 0 ? Architecture::kConv1dLstm
                                        : Architecture::kConv1d2dLstm;
  const NetworkSpec spec = make_spec(arch, 1, 9);
  const Dataset data = random_dataset(spec, 5);
  TrainConfig cfg;
  cfg.batch_size = 25;
  cfg.max_epochs = 1;
  cfg.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(train(data, spec, cfg));
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GradCheck(benchmark::State& state) {
  NetworkSpec s;
  s.architecture = Architecture::kConv1d2dLstm;
  s.j = 1;
  s.n_exponent = 3;
  s.input_h = 4;
  s.input_w = 8;
  s.conv1.filter_h = 1;
  s.conv1.filter_w = 3;
  s.conv1.stride_h = 1;
  s.conv1.stride_w = 1;
  s.conv1.n_filters = 3;
  s.conv2.filter_h = 2;
  s.conv2.filter_w = 2;
  s.conv2.stride_h = 2;
  s.conv2.stride_w = 2;
  s.conv2.n_filters = 2;
  s.lstm_units = 5;
  s.n_classes = 5;
  const NetworkSpec spec = finalize_spec(s);
  for (auto _ : state) benchmark::DoNotOptimize(grad_check(spec, 7));
}
BENCHMARK(BM_GradCheck)->Unit(benchmark::kMillisecond);

}  // namespace
