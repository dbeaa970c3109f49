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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "oracles.hpp"

#include "gaborlens/error.hpp"
#include "gaborlens/features.hpp"

using namespace gaborlens;

TEST_CASE("weighted_log matches its defining values") {
  Eigen::VectorXd v(5);
  v << 0.0, 1.0, -1.0, std::exp(-1.0), -std::exp(-1.0);
  const Eigen::VectorXd b = weighted_log(v);
  CHECK(b(0) == 0.0);
  CHECK(b(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b(2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b(3) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(b(4) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  // Half-way point: -0.5 ln 0.5 = 0.5 ln 2.
  Eigen::VectorXd h(1);
  h << 0.5;
  CHECK(weighted_log(h)(0) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

  Eigen::VectorXd bad(1);
  bad << 1.0 + 1e-6;
  CHECK_THROWS_AS(weighted_log(bad), PreconditionError);
}

TEST_CASE("standardize_normalize lands in [-1, 1] with unit peak") {
  Eigen::VectorXd two(2);
  two << 1.0, -1.0;
  const Eigen::VectorXd s2 = standardize_normalize(two);
  CHECK(s2(0) == doctest::Approx(1.0));
  CHECK(s2(1) == doctest::Approx(-1.0));

  Eigen::VectorXd ramp(2);
  ramp << 0.0, 2.0;
  const Eigen::VectorXd sr = standardize_normalize(ramp);
  CHECK(sr(0) == doctest::Approx(-1.0));
  CHECK(sr(1) == doctest::Approx(1.0));

  const Eigen::VectorXd r = testing::random_vector(64, 7);
  const Eigen::VectorXd s = standardize_normalize(r);
  CHECK(s.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);

  // Mean zero and proportional standardization are preserved up to scale.
  CHECK(std::abs(s.mean()) <= 1e-12);

  const Eigen::VectorXd zero = standardize_normalize(Eigen::VectorXd::Zero(4));
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(standardize_normalize(Eigen::VectorXd::Constant(3, 5.0)),
                  DegenerateInputError);
  CHECK_THROWS_AS(standardize_normalize(Eigen::VectorXd()), PreconditionError);
}

TEST_CASE("reshape lays frequencies along rows and translations along columns") {
  // N = 3, j = 1: 4 frequency rows, 8 translation columns, 32 entries.
  Eigen::VectorXd b(32);
  for (Eigen::Index i = 0; i < 32; ++i) b(i) = static_cast<double>(i);
  const FeatureMatrix m = reshape_to_matrix(b, 1, 3);
  CHECK(m.values.rows() == 4);
  CHECK(m.values.cols() == 8);
  CHECK(m.values(2, 5) == b(21));
  CHECK(m.values(0, 0) == b(0));
  CHECK(m.values(3, 7) == b(31));
  CHECK(m.j == 1);
  CHECK(m.n_exponent == 3);

  CHECK_THROWS_AS(reshape_to_matrix(Eigen::VectorXd::Zero(31), 1, 3),
                  PreconditionError);
}

TEST_CASE("reshape round-trips for every scale level at N=11") {
  for (int j = 1; j <= 10; ++j) {
    const Eigen::Index rows = Eigen::Index{1} << (j + 1);
    const Eigen::Index cols = Eigen::Index{1} << (11 - j + 1);
    const Eigen::VectorXd b = testing::random_vector(rows * cols, 400 + j);
    const FeatureMatrix m = reshape_to_matrix(b, j, 11);
    REQUIRE(m.values.rows() == rows);
    REQUIRE(m.values.cols() == cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index q = 0; q < cols; ++q)
        REQUIRE(m.values(r, q) == b(r * cols + q));
  }
  // Shape extremes.
  CHECK(reshape_to_matrix(Eigen::VectorXd::Zero(8192), 1, 11).values.rows() ==
        4);
  CHECK(reshape_to_matrix(Eigen::VectorXd::Zero(8192), 1, 11).values.cols() ==
        2048);
  CHECK(reshape_to_matrix(Eigen::VectorXd::Zero(8192), 10, 11).values.rows() ==
        2048);
  CHECK(reshape_to_matrix(Eigen::VectorXd::Zero(8192), 10, 11).values.cols() ==
        4);
}

TEST_CASE("featurize maps the zero code to the zero image") {
  const FeatureMatrix m = featurize(Eigen::VectorXd::Zero(32), 1, 3);
  CHECK(m.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("featurized values stay within the transform's range") {
  const Eigen::VectorXd coeffs = testing::random_vector(128, 17);
  const FeatureMatrix m = featurize(coeffs, 2, 5);
  CHECK(m.values.minCoeff() >= 0.0);
  CHECK(m.values.maxCoeff() <= std::exp(-1.0) + 1e-12);

  const FeatureMatrix lin =
      featurize(coeffs, 2, 5, FeatureTransform::kLinear);
  CHECK(lin.values.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);

  const FeatureMatrix sq =
      featurize(coeffs, 2, 5, FeatureTransform::kSquared);
  CHECK(sq.values.minCoeff() >= 0.0);
  CHECK(sq.values.maxCoeff() <= 1.0 + 1e-12);

  // kSquared is the elementwise square of kLinear, reshaped identically.
  CHECK((sq.values - lin.values.cwiseProduct(lin.values))
            .cwiseAbs()
            .maxCoeff() <= 1e-15);
}

TEST_CASE("a code confined to one frequency lights up one image row") {
  // N = 5, j = 2: 8 frequency rows, 16 translations. Put mass only on
  // frequency index c = 5 (entries 5*16 .. 5*16+15).
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(128);
  for (Eigen::Index q = 0; q < 16; ++q)
    coeffs(5 * 16 + q) = 0.5 + 0.1 * static_cast<double>(q % 3);

  const FeatureMatrix m = featurize(coeffs, 2, 5);
  // standardize_normalize shifts the off-row zeros to a common nonzero
  // level, so compare variation: the planted row must vary, others must be
  // flat at the shifted-zero response.
  for (Eigen::Index r = 0; r < 8; ++r) {
    const double spread =
        m.values.row(r).maxCoeff() - m.values.row(r).minCoeff();
    if (r == 5)
      CHECK(spread > 1e-3);
    else
      CHECK(spread <= 1e-15);
  }
}

TEST_CASE("features are invariant to a global sign flip") {
  const Eigen::VectorXd coeffs = testing::random_vector(128, 23);
  const FeatureMatrix a = featurize(coeffs, 2, 5);
  const FeatureMatrix b = featurize(-coeffs, 2, 5);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("permuting translations permutes image columns consistently") {
  const Eigen::Index rows = 8, cols = 16;
  const Eigen::VectorXd coeffs = testing::random_vector(rows * cols, 29);

  // Reverse the translation order within every frequency band.
  Eigen::VectorXd reversed(rows * cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index q = 0; q < cols; ++q)
      reversed(r * cols + (cols - 1 - q)) = coeffs(r * cols + q);

  const FeatureMatrix a = featurize(coeffs, 2, 5);
  const FeatureMatrix b = featurize(reversed, 2, 5);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index q = 0; q < cols; ++q)
      CHECK(b.values(r, cols - 1 - q) == doctest::Approx(a.values(r, q)));
}

TEST_CASE("feature tensors round-trip through the binary format") {
  const Eigen::VectorXd coeffs = testing::random_vector(128, 31);
  const FeatureMatrix m = featurize(coeffs, 2, 5);
  const auto path = std::filesystem::temp_directory_path() / "gl_feat.glft";
  save_feature_matrix(path, m);
  const FeatureMatrix back = load_feature_matrix(path);
  CHECK(back.j == m.j);
  CHECK(back.n_exponent == m.n_exponent);
  REQUIRE(back.values.rows() == m.values.rows());
  REQUIRE(back.values.cols() == m.values.cols());
  // Stored as f32: compare at single precision.
  CHECK((back.values - m.values).cwiseAbs().maxCoeff() <= 1e-6);
  std::filesystem::remove(path);
}

TEST_CASE("corrupt tensor files are rejected") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bad_magic = dir / "gl_feat_bad.glft";
  {
    std::ofstream out(bad_magic, std::ios::binary);
    out << "NOPExxxxxxxxxxxxxxxxxxx";
  }
  CHECK_THROWS_AS(load_feature_matrix(bad_magic), FormatError);
  std::filesystem::remove(bad_magic);

  const auto truncated = dir / "gl_feat_trunc.glft";
  {
    const FeatureMatrix m = featurize(testing::random_vector(32, 37), 1, 3);
    save_feature_matrix(truncated, m);
    std::filesystem::resize_file(truncated,
                                 std::filesystem::file_size(truncated) - 9);
  }
  CHECK_THROWS_AS(load_feature_matrix(truncated), FormatError);
  std::filesystem::remove(truncated);
}

TEST_CASE("csv export writes one line per image row") {
  FeatureMatrix m;
  m.j = 1;
  m.n_exponent = 1;
  m.values = Eigen::MatrixXd(2, 4);
  m.values << 0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75;

  const auto path = std::filesystem::temp_directory_path() / "gl_feat.csv";
  export_feature_csv(path, m);
  std::ifstream in(path);
  std::string line1, line2, extra;
  REQUIRE(static_cast<bool>(std::getline(in, line1)));
  REQUIRE(static_cast<bool>(std::getline(in, line2)));
  CHECK_FALSE(static_cast<bool>(std::getline(in, extra)));
  CHECK(line1 == "0,0.25,0.5,0.75");
  CHECK(line2 == "1,1.25,1.5,1.75");
  std::filesystem::remove(path);
}

TEST_CASE("transform names are stable") {
  CHECK(std::string(to_string(FeatureTransform::kWeightedLog)) ==
        "weighted_log");
  CHECK(std::string(to_string(FeatureTransform::kLinear)) == "linear");
  CHECK(std::string(to_string(FeatureTransform::kSquared)) == "squared");
}
