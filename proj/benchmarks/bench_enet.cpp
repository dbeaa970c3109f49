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

#include "gaborlens/elastic_net.hpp"
#include "gaborlens/synth.hpp"

namespace {

using namespace gaborlens;

Eigen::VectorXd pcg_vector(int n_exponent, std::uint64_t seed) {
  const Recording rec = synth_pcg(ClassLabel::kAS, n_exponent, seed);
  return Eigen::Map<const Eigen::VectorXd>(
      rec.samples.data(), static_cast<Eigen::Index>(rec.samples.size()));
}

void BM_AdmmSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GaborDictionary dict = GaborDictionary::build(2, n, false);
  ElasticNetConfig cfg;
  cfg.tol = 1e-4;
  cfg.max_iter = 500;
  const ElasticNet enet(dict, cfg);
  const Eigen::VectorXd x = pcg_vector(n, 7);
  const double lambda = 0.1 * enet.lambda_max(x, 0.5);
  enet.admm_solve(x, 0.5, lambda);  // pay the factorization once, up front
  for (auto _ : state)
    benchmark::DoNotOptimize(enet.admm_solve(x, 0.5, lambda));
}
BENCHMARK(BM_AdmmSolve)->Arg(7)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_CrossValidatedFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GaborDictionary dict = GaborDictionary::build(2, n, false);
  ElasticNetConfig cfg;
  cfg.lambda_count = 12;
  cfg.lambda_min_ratio = 1e-3;
  cfg.tol = 1e-3;
  cfg.max_iter = 200;
  cfg.cv_folds = 3;
  const ElasticNet enet(dict, cfg);
  const Eigen::VectorXd x = pcg_vector(n, 7);
  enet.fit(x, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(enet.fit(x, 0.5));
}
BENCHMARK(BM_CrossValidatedFit)
    ->Arg(7)
    ->Arg(8)
    ->Unit(benchmark::kMillisecond);

void BM_RidgeClosedForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GaborDictionary dict = GaborDictionary::build(2, n, false);
  const ElasticNet enet(dict, ElasticNetConfig{});
  const Eigen::VectorXd x = pcg_vector(n, 7);
  enet.ridge_closed_form(x, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(enet.ridge_closed_form(x, 0.1));
}
BENCHMARK(BM_RidgeClosedForm)
    ->Arg(7)
    ->Arg(8)
    ->Arg(9)
    ->Unit(benchmark::kMillisecond);

}  // namespace
