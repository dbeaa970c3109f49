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

#ifndef GABORLENS_FEATURES_HPP_
#define GABORLENS_FEATURES_HPP_

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

namespace gaborlens {

enum class FeatureTransform : int { kWeightedLog = 0, kLinear = 1, kSquared = 2 };

const char* to_string(FeatureTransform t);

// Time-frequency feature image derived from one coefficient vector:
// rows = 2^(j+1) frequency bins, cols = 2^(N-j+1) translations.
struct FeatureMatrix {
  int j = 0;
  int n_exponent = 0;
  Eigen::MatrixXd values;  // rows x cols
};

// Zero mean, unit population std, then scaled by 1/max|.| into [-1, 1].
// The zero vector passes through unchanged; a nonzero constant vector is a
// degenerate input (its variance vanishes).
Eigen::VectorXd standardize_normalize(const Eigen::VectorXd& v);

// b = -|v| ln|v| extended continuously with b = 0 at v = 0; requires
// |v| <= 1 (+1e-12 slack). Ranges in [0, 1/e], peaking at |v| = 1/e.
Eigen::VectorXd weighted_log(const Eigen::VectorXd& v);

// Reshapes a length-2^(N+2) vector into the (frequency x translation) image
// for level j: entry (r, q) <- b[r * 2^(N-j+1) + q].
FeatureMatrix reshape_to_matrix(const Eigen::VectorXd& b, int j,
                                int n_exponent);

// standardize_normalize -> transform -> reshape. An all-zero coefficient
// vector yields the all-zero matrix.
FeatureMatrix featurize(const Eigen::VectorXd& coeffs, int j, int n_exponent,
                        FeatureTransform transform = FeatureTransform::kWeightedLog);

// Binary tensor file: header (magic "GLFT", u32 j, u32 N, u32 rows,
// u32 cols), then row-major little-endian f32 values.
void save_feature_matrix(const std::filesystem::path& path,
                         const FeatureMatrix& m);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

// CSV export: one row per matrix row, plain numeric cells.
void export_feature_csv(const std::filesystem::path& path,
                        const FeatureMatrix& m);

}  // namespace gaborlens

#endif  // GABORLENS_FEATURES_HPP_
