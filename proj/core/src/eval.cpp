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

#include "gaborlens/eval.hpp"

#include <cmath>

#include "gaborlens/error.hpp"
#include "gaborlens/rng.hpp"

namespace gaborlens {

long ConfusionMatrix::total() const {
  long s = 0;
  for (long c : counts) s += c;
  return s;
}

long ConfusionMatrix::diagonal() const {
  long s = 0;
  for (int k = 0; k < n_classes; ++k) s += at(k, k);
  return s;
}

ConfusionMatrix confusion_from_pairs(const std::vector<int>& truth,
                                     const std::vector<int>& predicted,
                                     int n_classes) {
  if (truth.size() != predicted.size())
    throw PreconditionError("truth/prediction lists differ in length");
  ConfusionMatrix cm(n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i], p = predicted[i];
    if (t < 0 || t >= n_classes || p < 0 || p >= n_classes)
      throw PreconditionError("class index outside the confusion range");
    ++cm.at(t, p);
  }
  return cm;
}

EvalMetrics compute_metrics(const ConfusionMatrix& cm) {
  EvalMetrics m;
  m.confusion = cm;
  const int n = cm.n_classes;
  const long total = cm.total();
  m.per_class.resize(n);

  for (int k = 0; k < n; ++k) {
    long tp = cm.at(k, k), fn = 0, fp = 0;
    for (int o = 0; o < n; ++o) {
      if (o == k) continue;
      fn += cm.at(k, o);
      fp += cm.at(o, k);
    }
    const long tn = total - tp - fn - fp;
    ClassMetrics& c = m.per_class[k];
    c.support = tp + fn;
    if (tp + fp > 0)
      c.precision = 100.0 * tp / double(tp + fp);
    else
      c.precision_defined = false;
    if (tp + fn > 0)
      c.recall = 100.0 * tp / double(tp + fn);
    else
      c.recall_defined = false;
    if (tn + fp > 0)
      c.specificity = 100.0 * tn / double(tn + fp);
    else
      c.specificity_defined = false;
    if (c.precision + c.recall > 0.0)
      c.f1 = 2.0 * c.precision * c.recall / (c.precision + c.recall);
    else
      c.f1_defined = false;

    m.macro_precision += c.precision;
    m.macro_recall += c.recall;
    m.macro_specificity += c.specificity;
    m.macro_f1 += c.f1;
  }
  m.macro_precision /= n;
  m.macro_recall /= n;
  m.macro_specificity /= n;
  m.macro_f1 /= n;
  m.accuracy = total > 0 ? 100.0 * cm.diagonal() / double(total) : 0.0;
  return m;
}

EvalMetrics evaluate_model(const ModelWeights& w, const Dataset& data) {
  std::vector<int> truth, predicted;
  truth.reserve(data.size());
  predicted.reserve(data.size());
  for (const TrainExample& ex : data) {
    truth.push_back(static_cast<int>(ex.label));
    predicted.push_back(static_cast<int>(predict(w, ex.input)));
  }
  return compute_metrics(
      confusion_from_pairs(truth, predicted, w.spec.n_classes));
}

SplitIndices stratified_split(const std::vector<int>& labels,
                              double train_fraction, std::uint64_t seed,
                              int n_classes) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw PreconditionError("train_fraction must be in [0, 1]");
  std::vector<std::vector<std::size_t>> buckets(n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes)
      throw PreconditionError("class index outside the split range");
    buckets[labels[i]].push_back(i);
  }
  SplitIndices split;
  Rng rng(derive_seed(seed, 0x5714));
  for (int k = 0; k < n_classes; ++k) {
    std::vector<std::size_t>& b = buckets[k];
    if (b.size() < 2)
      throw PreconditionError("class " + std::to_string(k) +
                              " has fewer than two examples; cannot stratify");
    rng.shuffle(b);
    const std::size_t n_train = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(b.size())));
    for (std::size_t i = 0; i < b.size(); ++i)
      (i < n_train ? split.train : split.test).push_back(b[i]);
  }
  return split;
}

SplitIndices random_split(std::size_t n, double train_fraction,
                          std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw PreconditionError("train_fraction must be in [0, 1]");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x5714));
  rng.shuffle(order);
  const std::size_t n_train = static_cast<std::size_t>(
      std::lround(train_fraction * static_cast<double>(n)));
  SplitIndices split;
  for (std::size_t i = 0; i < n; ++i)
    (i < n_train ? split.train : split.test).push_back(order[i]);
  return split;
}

RepeatedEvalReport repeated_eval(const Dataset& data, const NetworkSpec& spec,
                                 const TrainConfig& cfg, int runs,
                                 double train_fraction, std::uint64_t seed,
                                 bool stratified) {
  if (runs < 1) throw PreconditionError("need at least one evaluation run");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw PreconditionError(
        "train_fraction must lie strictly between 0 and 1");
  if (data.empty()) throw PreconditionError("empty evaluation set");

  std::vector<int> labels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    labels[i] = static_cast<int>(data[i].label);

  RepeatedEvalReport report;
  report.runs = runs;
  report.train_fraction = train_fraction;
  const int n_classes = spec.n_classes;

  for (int r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    const SplitIndices split =
        stratified
            ? stratified_split(labels, train_fraction, run_seed, n_classes)
            : random_split(labels.size(), train_fraction, run_seed);
    if (split.train.empty() || split.test.empty())
      throw PreconditionError("stratified split left train or test empty");
    Dataset train_set, test_set;
    train_set.reserve(split.train.size());
    test_set.reserve(split.test.size());
    for (std::size_t i : split.train) train_set.push_back(data[i]);
    for (std::size_t i : split.test) test_set.push_back(data[i]);

    TrainConfig run_cfg = cfg;
    run_cfg.seed = run_seed;
    const TrainOutput trained = train(train_set, spec, run_cfg);
    report.run_metrics.push_back(evaluate_model(trained.weights, test_set));
  }

  auto summarize = [&](auto&& getter) {
    MetricSummary s;
    double sum = 0.0, sq = 0.0;
    for (const EvalMetrics& m : report.run_metrics) {
      const double v = getter(m);
      sum += v;
      sq += v * v;
    }
    s.mean = sum / runs;
    const double var = sq / runs - s.mean * s.mean;
    s.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    return s;
  };

  report.accuracy = summarize([](const EvalMetrics& m) { return m.accuracy; });
  report.macro_precision =
      summarize([](const EvalMetrics& m) { return m.macro_precision; });
  report.macro_recall =
      summarize([](const EvalMetrics& m) { return m.macro_recall; });
  report.macro_specificity =
      summarize([](const EvalMetrics& m) { return m.macro_specificity; });
  report.macro_f1 = summarize([](const EvalMetrics& m) { return m.macro_f1; });
  report.per_class.resize(n_classes);
  for (int k = 0; k < n_classes; ++k) {
    report.per_class[k][0] = summarize(
        [k](const EvalMetrics& m) { return m.per_class[k].precision; });
    report.per_class[k][1] =
        summarize([k](const EvalMetrics& m) { return m.per_class[k].recall; });
    report.per_class[k][2] = summarize(
        [k](const EvalMetrics& m) { return m.per_class[k].specificity; });
    report.per_class[k][3] =
        summarize([k](const EvalMetrics& m) { return m.per_class[k].f1; });
  }
  return report;
}

}  // namespace gaborlens
