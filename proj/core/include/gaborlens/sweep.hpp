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

#ifndef GABORLENS_SWEEP_HPP_
#define GABORLENS_SWEEP_HPP_

#include <string>
#include <vector>

#include "gaborlens/elastic_net.hpp"
#include "gaborlens/signal_prep.hpp"

namespace gaborlens {

// Per-fit diagnostics kept alongside the aggregated table so consumers can
// recompute or re-slice the aggregation.
struct SweepFit {
  int j = 0;
  double alpha = 0.0;
  std::size_t recording_index = 0;
  ClassLabel label = ClassLabel::kN;
  double lambda_selected = 0.0;
  double residual_energy = 0.0;
  double coeff_energy = 0.0;
  Eigen::Index n_nonzero = 0;
};

// One aggregated row per (j, alpha, class); class "all" rows aggregate over
// every recording of the cell.
struct DiagnosticsRow {
  int j = 0;
  double beta = 0.0;
  double alpha = 0.0;
  std::string class_name;
  double mean_residual_energy = 0.0;
  double mean_coeff_energy = 0.0;
  double mean_nonzero = 0.0;
  double std_nonzero = 0.0;  // population std
  long n_fits = 0;
};

struct DiagnosticsTable {
  std::vector<DiagnosticsRow> rows;
  std::vector<SweepFit> fits;
};

// Fits every recording at every (j, alpha) cell and aggregates diagnostics.
// Recordings must all be length 2^n_exponent and labeled. Fits within a j
// level run on `workers` threads; results are identical for any worker
// count because each fit is a pure function.
DiagnosticsTable sweep(const std::vector<Recording>& recordings,
                       const std::vector<int>& j_list,
                       const std::vector<double>& alpha_list, int n_exponent,
                       const ElasticNetConfig& cfg, int workers = 1);

}  // namespace gaborlens

#endif  // GABORLENS_SWEEP_HPP_
