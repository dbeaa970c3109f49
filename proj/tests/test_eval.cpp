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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "gaborlens/error.hpp"
#include "gaborlens/eval.hpp"

using namespace gaborlens;

namespace {

NetworkSpec small_spec() {
  NetworkSpec s;
  s.architecture = Architecture::kConv1dLstm;
  s.j = 1;
  s.n_exponent = 3;
  s.input_h = 4;
  s.input_w = 8;
  s.conv1.filter_h = 1;
  s.conv1.filter_w = 3;
  s.conv1.stride_h = 1;
  s.conv1.stride_w = 1;
  s.conv1.n_filters = 3;
  s.lstm_units = 4;
  return finalize_spec(s);
}

FeatureMatrix random_features(std::uint64_t seed) {
  const Eigen::VectorXd v = testing::random_vector(32, seed);
  FeatureMatrix m;
  m.j = 1;
  m.n_exponent = 3;
  m.values.resize(4, 8);
  for (int r = 0; r < 4; ++r)
    for (int q = 0; q < 8; ++q) m.values(r, q) = v(r * 8 + q);
  return m;
}

Dataset balanced_dataset(int per_class, std::uint64_t seed0) {
  Dataset data;
  for (int k = 0; k < kNumClasses; ++k)
    for (int i = 0; i < per_class; ++i) {
      data.push_back({random_features(seed0 + 10 * k + i),
                      static_cast<ClassLabel>(k)});
    }
  return data;
}

}  // namespace

TEST_CASE("confusion matrices accumulate labeled pairs") {
  const std::vector<int> truth = {0, 0, 1, 2, 2, 2, 4};
  const std::vector<int> pred = {0, 1, 1, 2, 2, 0, 4};
  const ConfusionMatrix cm = confusion_from_pairs(truth, pred);
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 1) == 1);
  CHECK(cm.at(2, 2) == 2);
  CHECK(cm.at(2, 0) == 1);
  CHECK(cm.at(4, 4) == 1);
  CHECK(cm.at(3, 3) == 0);
  CHECK(cm.total() == 7);
  CHECK(cm.diagonal() == 5);

  CHECK_THROWS_AS(confusion_from_pairs({0, 1}, {0}), PreconditionError);
  CHECK_THROWS_AS(confusion_from_pairs({0, 5}, {0, 0}), PreconditionError);
  CHECK_THROWS_AS(confusion_from_pairs({0, -1}, {0, 0}), PreconditionError);
}

TEST_CASE("metrics match a hand-computed three-class table") {
  ConfusionMatrix cm(3);
  cm.at(0, 0) = 2;
  cm.at(0, 1) = 1;
  cm.at(1, 1) = 3;
  cm.at(1, 2) = 1;
  cm.at(2, 0) = 1;
  cm.at(2, 2) = 2;

  const EvalMetrics m = compute_metrics(cm);
  CHECK(m.accuracy == doctest::Approx(70.0).epsilon(1e-12));
  REQUIRE(m.per_class.size() == 3);

  // Class 0: TP=2 FP=1 FN=1 TN=6.
  CHECK(m.per_class[0].precision == doctest::Approx(200.0 / 3.0));
  CHECK(m.per_class[0].recall == doctest::Approx(200.0 / 3.0));
  CHECK(m.per_class[0].specificity == doctest::Approx(600.0 / 7.0));
  CHECK(m.per_class[0].f1 == doctest::Approx(200.0 / 3.0));
  CHECK(m.per_class[0].support == 3);

  // Class 1: TP=3 FP=1 FN=1 TN=5.
  CHECK(m.per_class[1].precision == doctest::Approx(75.0));
  CHECK(m.per_class[1].recall == doctest::Approx(75.0));
  CHECK(m.per_class[1].specificity == doctest::Approx(500.0 / 6.0));
  CHECK(m.per_class[1].f1 == doctest::Approx(75.0));
  CHECK(m.per_class[1].support == 4);

  CHECK(m.macro_precision ==
        doctest::Approx((200.0 / 3.0 + 75.0 + 200.0 / 3.0) / 3.0));
  CHECK(m.macro_recall == doctest::Approx(m.macro_precision));
}

TEST_CASE("zero denominators clear the defined flags instead of dividing") {
  ConfusionMatrix cm(2);
  cm.at(0, 0) = 5;  // class 1 never occurs and is never predicted

  const EvalMetrics m = compute_metrics(cm);
  CHECK(m.per_class[1].recall == 0.0);
  CHECK_FALSE(m.per_class[1].recall_defined);
  CHECK(m.per_class[1].precision == 0.0);
  CHECK_FALSE(m.per_class[1].precision_defined);
  CHECK_FALSE(m.per_class[1].f1_defined);
  CHECK(m.per_class[1].specificity == doctest::Approx(100.0));
  CHECK(m.per_class[1].specificity_defined);

  // Class 0 has no negatives, so its specificity is the undefined one.
  CHECK(m.per_class[0].precision == doctest::Approx(100.0));
  CHECK(m.per_class[0].recall == doctest::Approx(100.0));
  CHECK_FALSE(m.per_class[0].specificity_defined);
  CHECK(m.per_class[0].f1 == doctest::Approx(100.0));
}

TEST_CASE("metric identities hold on a random confusion matrix") {
  ConfusionMatrix cm(kNumClasses);
  const Eigen::VectorXd v = testing::random_vector(25, 77);
  for (int t = 0; t < 5; ++t)
    for (int p = 0; p < 5; ++p)
      cm.at(t, p) = static_cast<long>(std::floor(12.0 * std::abs(v(t * 5 + p))));

  const EvalMetrics m = compute_metrics(cm);

  long support_sum = 0;
  for (int k = 0; k < 5; ++k) {
    long row = 0, col = 0;
    for (int o = 0; o < 5; ++o) {
      row += cm.at(k, o);
      col += cm.at(o, k);
    }
    const long tp = cm.at(k, k);
    CHECK(m.per_class[k].support == row);
    support_sum += row;

    if (m.per_class[k].recall_defined)
      CHECK(m.per_class[k].recall ==
            doctest::Approx(100.0 * static_cast<double>(tp) /
                            static_cast<double>(row)).epsilon(1e-9));
    if (m.per_class[k].precision_defined)
      CHECK(m.per_class[k].precision ==
            doctest::Approx(100.0 * static_cast<double>(tp) /
                            static_cast<double>(col)).epsilon(1e-9));
    if (m.per_class[k].f1_defined && m.per_class[k].precision > 0.0 &&
        m.per_class[k].recall > 0.0) {
      const double p = m.per_class[k].precision, r = m.per_class[k].recall;
      CHECK(m.per_class[k].f1 ==
            doctest::Approx(2.0 * p * r / (p + r)).epsilon(1e-9));
    }
  }
  CHECK(support_sum == cm.total());
  CHECK(m.accuracy ==
        doctest::Approx(100.0 * static_cast<double>(cm.diagonal()) /
                        static_cast<double>(cm.total())).epsilon(1e-9));

  double mp = 0.0, mr = 0.0, ms = 0.0, mf = 0.0;
  for (int k = 0; k < 5; ++k) {
    mp += m.per_class[k].precision;
    mr += m.per_class[k].recall;
    ms += m.per_class[k].specificity;
    mf += m.per_class[k].f1;
  }
  CHECK(m.macro_precision == doctest::Approx(mp / 5.0).epsilon(1e-12));
  CHECK(m.macro_recall == doctest::Approx(mr / 5.0).epsilon(1e-12));
  CHECK(m.macro_specificity == doctest::Approx(ms / 5.0).epsilon(1e-12));
  CHECK(m.macro_f1 == doctest::Approx(mf / 5.0).epsilon(1e-12));
}

TEST_CASE("stratified splits are disjoint, exhaustive and class-balanced") {
  std::vector<int> labels;
  const std::vector<int> counts = {4, 3, 2, 5, 2};
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < counts[static_cast<std::size_t>(k)]; ++i)
      labels.push_back(k);

  const SplitIndices s = stratified_split(labels, 0.675, 99);

  std::set<std::size_t> seen;
  for (std::size_t i : s.train) seen.insert(i);
  for (std::size_t i : s.test) seen.insert(i);
  CHECK(seen.size() == labels.size());  // disjoint and exhaustive
  CHECK(s.train.size() + s.test.size() == labels.size());

  // round(0.675 * n_k) training picks per class: 3, 2, 1, 3, 1.
  std::vector<int> train_per_class(5, 0);
  for (std::size_t i : s.train) train_per_class[labels[i]] += 1;
  CHECK(train_per_class[0] == 3);
  CHECK(train_per_class[1] == 2);
  CHECK(train_per_class[2] == 1);
  CHECK(train_per_class[3] == 3);
  CHECK(train_per_class[4] == 1);

  // Determinism in the seed.
  const SplitIndices again = stratified_split(labels, 0.675, 99);
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);

  CHECK_THROWS_AS(stratified_split(labels, -0.1, 99), PreconditionError);
  CHECK_THROWS_AS(stratified_split(labels, 1.1, 99), PreconditionError);
  CHECK_THROWS_AS(stratified_split({0, 0, 1}, 0.5, 99), PreconditionError);
  CHECK_THROWS_AS(stratified_split({0, 0, 7}, 0.5, 99), PreconditionError);
}

TEST_CASE("uniform splits honor the requested fraction") {
  const SplitIndices s = random_split(10, 0.675, 3);
  CHECK(s.train.size() == 7);  // round(6.75)
  CHECK(s.test.size() == 3);
  std::set<std::size_t> seen;
  for (std::size_t i : s.train) seen.insert(i);
  for (std::size_t i : s.test) seen.insert(i);
  CHECK(seen.size() == 10);
  for (std::size_t i : seen) CHECK(i < 10);

  const SplitIndices again = random_split(10, 0.675, 3);
  CHECK(again.train == s.train);
}

TEST_CASE("repeated evaluation aggregates recomputable summaries") {
  const NetworkSpec spec = small_spec();
  const Dataset data = balanced_dataset(2, 500);

  TrainConfig cfg;
  cfg.optimizer = Optimizer::kAdam;
  cfg.batch_size = 5;
  cfg.max_epochs = 1;

  const RepeatedEvalReport rep = repeated_eval(data, spec, cfg, 2, 0.5, 7);
  CHECK(rep.runs == 2);
  CHECK(rep.train_fraction == 0.5);
  REQUIRE(rep.run_metrics.size() == 2);
  REQUIRE(rep.per_class.size() == kNumClasses);

  const double a0 = rep.run_metrics[0].accuracy;
  const double a1 = rep.run_metrics[1].accuracy;
  const double mean = (a0 + a1) / 2.0;
  CHECK(rep.accuracy.mean == doctest::Approx(mean).epsilon(1e-12));
  const double var = ((a0 - mean) * (a0 - mean) + (a1 - mean) * (a1 - mean)) / 2.0;
  CHECK(rep.accuracy.stddev == doctest::Approx(std::sqrt(var)).epsilon(1e-9));

  // Per-class summaries come from the same stored runs (index 1 = recall).
  for (int k = 0; k < kNumClasses; ++k) {
    const double r0 = rep.run_metrics[0].per_class[static_cast<std::size_t>(k)].recall;
    const double r1 = rep.run_metrics[1].per_class[static_cast<std::size_t>(k)].recall;
    CHECK(rep.per_class[static_cast<std::size_t>(k)][1].mean ==
          doctest::Approx((r0 + r1) / 2.0).epsilon(1e-12));
  }

  // Each run's confusion covers exactly the held-out half.
  for (const EvalMetrics& m : rep.run_metrics)
    CHECK(m.confusion.total() == 5);

  // A single run reports zero spread.
  const RepeatedEvalReport single = repeated_eval(data, spec, cfg, 1, 0.5, 7);
  CHECK(single.runs == 1);
  CHECK(single.accuracy.stddev == 0.0);
  CHECK(single.run_metrics.size() == 1);

  // Determinism in the global seed.
  const RepeatedEvalReport rep2 = repeated_eval(data, spec, cfg, 2, 0.5, 7);
  CHECK(rep2.accuracy.mean == rep.accuracy.mean);
  CHECK(rep2.macro_f1.mean == rep.macro_f1.mean);
}

TEST_CASE("repeated evaluation validates its configuration strictly") {
  const NetworkSpec spec = small_spec();
  const Dataset data = balanced_dataset(2, 600);
  TrainConfig cfg;
  cfg.max_epochs = 1;

  CHECK_THROWS_AS(repeated_eval(data, spec, cfg, 0, 0.5, 1), PreconditionError);
  CHECK_THROWS_AS(repeated_eval(data, spec, cfg, 1, 0.0, 1), PreconditionError);
  CHECK_THROWS_AS(repeated_eval(data, spec, cfg, 1, 1.0, 1), PreconditionError);
  CHECK_THROWS_AS(repeated_eval(Dataset{}, spec, cfg, 1, 0.5, 1),
                  PreconditionError);
}

TEST_CASE("the unstratified path accepts what stratification rejects") {
  const NetworkSpec spec = small_spec();
  Dataset skew;
  for (int k = 0; k < 4; ++k) {
    skew.push_back({random_features(700 + static_cast<unsigned>(k)),
                    static_cast<ClassLabel>(k)});
    skew.push_back({random_features(710 + static_cast<unsigned>(k)),
                    static_cast<ClassLabel>(k)});
  }
  skew.push_back({random_features(720), ClassLabel::kMVP});  // singleton

  TrainConfig cfg;
  cfg.max_epochs = 1;
  cfg.batch_size = 8;

  CHECK_THROWS_AS(repeated_eval(skew, spec, cfg, 1, 0.5, 3, true),
                  PreconditionError);
  const RepeatedEvalReport rep = repeated_eval(skew, spec, cfg, 1, 0.5, 3, false);
  CHECK(rep.runs == 1);
  CHECK(rep.run_metrics.size() == 1);
}

TEST_CASE("evaluating a model fills a complete confusion matrix") {
  const NetworkSpec spec = small_spec();
  const Dataset data = balanced_dataset(2, 800);
  const ModelWeights w = init_weights(spec, 3);
  const EvalMetrics m = evaluate_model(w, data);
  CHECK(m.confusion.total() == static_cast<long>(data.size()));
  CHECK(m.accuracy >= 0.0);
  CHECK(m.accuracy <= 100.0);
  const EvalMetrics m2 = evaluate_model(w, data);
  CHECK(m2.accuracy == m.accuracy);
  CHECK(m2.confusion.counts == m.confusion.counts);
}
