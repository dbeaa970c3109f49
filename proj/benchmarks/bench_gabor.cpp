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

#include "gaborlens/gabor.hpp"
#include "gaborlens/rng.hpp"

namespace {

using gaborlens::GaborDictionary;
using gaborlens::Rng;

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

void BM_DictionaryBuild(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(GaborDictionary::build(j, 9, false));
}
BENCHMARK(BM_DictionaryBuild)->Arg(1)->Arg(4)->Arg(8);

void BM_DictionaryApplyDense(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const GaborDictionary dict = GaborDictionary::build(j, 9, false);
  const Eigen::VectorXd a = random_vector(dict.cols(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dict.apply(a));
}
BENCHMARK(BM_DictionaryApplyDense)->Arg(1)->Arg(4)->Arg(8);

// Synthesis cost scales with the coefficient support, not the dictionary
// width; 64 nonzeros stands in for a typical selected model.
void BM_DictionaryApplySparse(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const GaborDictionary dict = GaborDictionary::build(j, 9, false);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(dict.cols());
  Rng rng(2);
  for (int k = 0; k < 64; ++k)
    a[static_cast<Eigen::Index>(rng.uniform_index(
        static_cast<std::uint64_t>(dict.cols())))] = rng.uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dict.apply(a));
}
BENCHMARK(BM_DictionaryApplySparse)->Arg(1)->Arg(4)->Arg(8);

void BM_DictionaryAdjoint(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  const GaborDictionary dict = GaborDictionary::build(j, 9, false);
  const Eigen::VectorXd x = random_vector(dict.rows(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(dict.apply_adjoint(x));
}
BENCHMARK(BM_DictionaryAdjoint)->Arg(1)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
