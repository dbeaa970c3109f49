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

#include "gaborlens/sweep.hpp"

#include <cmath>
#include <map>

#include "gaborlens/error.hpp"
#include "gaborlens/log.hpp"
#include "gaborlens/parallel.hpp"

namespace gaborlens {
namespace {

struct Accumulator {
  double residual_sum = 0.0;
  double coeff_sum = 0.0;
  double nnz_sum = 0.0;
  double nnz_sq_sum = 0.0;
  long n = 0;

  void add(const SweepFit& f) {
    residual_sum += f.residual_energy;
    coeff_sum += f.coeff_energy;
    const double nnz = static_cast<double>(f.n_nonzero);
    nnz_sum += nnz;
    nnz_sq_sum += nnz * nnz;
    ++n;
  }

  DiagnosticsRow row(int j, double alpha, const std::string& cls) const {
    DiagnosticsRow r;
    r.j = j;
    r.beta = std::pow(2.0, j);
    r.alpha = alpha;
    r.class_name = cls;
    r.n_fits = n;
    if (n > 0) {
      const double dn = static_cast<double>(n);
      r.mean_residual_energy = residual_sum / dn;
      r.mean_coeff_energy = coeff_sum / dn;
      r.mean_nonzero = nnz_sum / dn;
      const double var = nnz_sq_sum / dn - r.mean_nonzero * r.mean_nonzero;
      r.std_nonzero = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return r;
  }
};

}  // namespace

DiagnosticsTable sweep(const std::vector<Recording>& recordings,
                       const std::vector<int>& j_list,
                       const std::vector<double>& alpha_list, int n_exponent,
                       const ElasticNetConfig& cfg, int workers) {
  if (recordings.empty()) throw PreconditionError("sweep: no recordings");
  if (j_list.empty() || alpha_list.empty())
    throw PreconditionError("sweep: empty grid");
  const std::size_t L = std::size_t{1} << n_exponent;
  std::vector<Eigen::VectorXd> signals;
  signals.reserve(recordings.size());
  for (const Recording& r : recordings) {
    if (r.samples.size() != L)
      throw PreconditionError("sweep: recording '" + r.id +
                              "' has length " +
                              std::to_string(r.samples.size()) +
                              ", expected " + std::to_string(L));
    if (!r.label.has_value())
      throw PreconditionError("sweep: recording '" + r.id + "' is unlabeled");
    signals.push_back(Eigen::Map<const Eigen::VectorXd>(
        r.samples.data(), static_cast<Eigen::Index>(L)));
  }

  DiagnosticsTable table;
  for (int j : j_list) {
    log_info("sweep: level j=" + std::to_string(j));
    const GaborDictionary dict = GaborDictionary::build(j, n_exponent, true);
    const ElasticNet solver(dict, cfg);
    // One task per (recording, alpha); pure math, so results do not depend
    // on scheduling.
    const std::size_t n_tasks = recordings.size() * alpha_list.size();
    std::vector<SweepFit> fits(n_tasks);
    parallel_for(n_tasks, workers, [&](std::size_t task) {
      const std::size_t rec = task / alpha_list.size();
      const double alpha = alpha_list[task % alpha_list.size()];
      const FitResult fr = solver.fit(signals[rec], alpha);
      SweepFit& out = fits[task];
      out.j = j;
      out.alpha = alpha;
      out.recording_index = rec;
      out.label = *recordings[rec].label;
      out.lambda_selected = fr.lambda_selected;
      out.residual_energy = fr.residual_energy;
      out.coeff_energy = fr.coeff_energy;
      out.n_nonzero = fr.n_nonzero;
    });
    table.fits.insert(table.fits.end(), fits.begin(), fits.end());
  }

  // Aggregate per (j, alpha, class) plus an "all" row per cell, in grid
  // order so output is deterministic.
  for (int j : j_list) {
    for (double alpha : alpha_list) {
      std::map<int, Accumulator> per_class;
      Accumulator all;
      for (const SweepFit& f : table.fits) {
        if (f.j != j || f.alpha != alpha) continue;
        per_class[static_cast<int>(f.label)].add(f);
        all.add(f);
      }
      for (const auto& [cls, acc] : per_class)
        table.rows.push_back(
            acc.row(j, alpha, to_string(static_cast<ClassLabel>(cls))));
      table.rows.push_back(all.row(j, alpha, "all"));
    }
  }
  return table;
}

}  // namespace gaborlens
