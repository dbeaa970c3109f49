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

#ifndef GABORLENS_EVAL_HPP_
#define GABORLENS_EVAL_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "gaborlens/net.hpp"

namespace gaborlens {

// Confusion counts with true classes on rows and predictions on columns.
struct ConfusionMatrix {
  int n_classes = kNumClasses;
  std::vector<long> counts;

  explicit ConfusionMatrix(int n = kNumClasses)
      : n_classes(n),
        counts(static_cast<std::size_t>(n) * n, 0L) {}
  long& at(int truth, int predicted) {
    return counts[static_cast<std::size_t>(truth) * n_classes + predicted];
  }
  long at(int truth, int predicted) const {
    return counts[static_cast<std::size_t>(truth) * n_classes + predicted];
  }
  long total() const;
  long diagonal() const;
};

ConfusionMatrix confusion_from_pairs(const std::vector<int>& truth,
                                     const std::vector<int>& predicted,
                                     int n_classes = kNumClasses);

// One-vs-rest rates in percent. A zero denominator leaves the value at 0
// and clears the corresponding *_defined flag — the two cases stay
// distinguishable from a true 0%.
struct ClassMetrics {
  double precision = 0.0, recall = 0.0, specificity = 0.0, f1 = 0.0;
  long support = 0;
  bool precision_defined = true, recall_defined = true,
       specificity_defined = true, f1_defined = true;
};

struct EvalMetrics {
  ConfusionMatrix confusion{kNumClasses};
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;  // percent, 100 * diagonal / total
  // Macro averages treat undefined entries as their reported 0.
  double macro_precision = 0.0, macro_recall = 0.0, macro_specificity = 0.0,
         macro_f1 = 0.0;
};

EvalMetrics compute_metrics(const ConfusionMatrix& cm);

EvalMetrics evaluate_model(const ModelWeights& w, const Dataset& data);

// Per-class split: the first round(train_fraction * n_k) of a seeded
// shuffle of each class's indices go to train, the rest to test. Every
// class must contribute at least two examples.
struct SplitIndices {
  std::vector<std::size_t> train, test;
};
SplitIndices stratified_split(const std::vector<int>& labels,
                              double train_fraction, std::uint64_t seed,
                              int n_classes = kNumClasses);

// Uniform split without class balancing: the first round(train_fraction * n)
// indices of one seeded shuffle go to train, the rest to test.
SplitIndices random_split(std::size_t n, double train_fraction,
                          std::uint64_t seed);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation across runs
};

struct RepeatedEvalReport {
  int runs = 0;
  double train_fraction = 0.0;
  MetricSummary accuracy;
  MetricSummary macro_precision, macro_recall, macro_specificity, macro_f1;
  // Per class: precision, recall, specificity, f1.
  std::vector<std::array<MetricSummary, 4>> per_class;
  std::vector<EvalMetrics> run_metrics;
};

// Repeats train/test with fresh splits (stratified per class by default,
// plain uniform when stratified is false); run r uses seed
// derive_seed(seed, r) for both the split and the training run.
// train_fraction must lie strictly between 0 and 1.
RepeatedEvalReport repeated_eval(const Dataset& data, const NetworkSpec& spec,
                                 const TrainConfig& cfg, int runs,
                                 double train_fraction, std::uint64_t seed,
                                 bool stratified = true);

}  // namespace gaborlens

#endif  // GABORLENS_EVAL_HPP_
