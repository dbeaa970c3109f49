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

#include "gaborlens/features.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "gaborlens/error.hpp"

namespace gaborlens {

const char* to_string(FeatureTransform t) {
  switch (t) {
    case FeatureTransform::kWeightedLog: return "weighted_log";
    case FeatureTransform::kLinear: return "linear";
    case FeatureTransform::kSquared: return "squared";
  }
  return "?";
}

Eigen::VectorXd standardize_normalize(const Eigen::VectorXd& v) {
  if (v.size() == 0)
    throw PreconditionError("standardize_normalize: empty vector");
  if (!v.allFinite())
    throw NumericError("standardize_normalize: non-finite input");
  if (v.isZero(0.0)) return v;  // all-zero coefficient vectors pass through

  const double mean = v.mean();
  const double var = (v.array() - mean).square().mean();
  if (var <= 0.0)
    throw DegenerateInputError(
        "standardize_normalize: constant nonzero vector");
  Eigen::VectorXd out = (v.array() - mean) / std::sqrt(var);
  const double peak = out.cwiseAbs().maxCoeff();
  out /= peak;
  return out;
}

Eigen::VectorXd weighted_log(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > 1.0 + 1e-12)
      throw PreconditionError("weighted_log: |v| exceeds 1");
    out[i] = a > 0.0 ? -a * std::log(std::min(a, 1.0)) : 0.0;
  }
  return out;
}

FeatureMatrix reshape_to_matrix(const Eigen::VectorXd& b, int j,
                                int n_exponent) {
  const Eigen::Index rows = Eigen::Index{1} << (j + 1);
  const Eigen::Index cols = Eigen::Index{1} << (n_exponent - j + 1);
  if (b.size() != rows * cols)
    throw PreconditionError("reshape_to_matrix: vector length " +
                            std::to_string(b.size()) + " != " +
                            std::to_string(rows * cols));
  FeatureMatrix m;
  m.j = j;
  m.n_exponent = n_exponent;
  m.values.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index q = 0; q < cols; ++q)
      m.values(r, q) = b[r * cols + q];
  return m;
}

FeatureMatrix featurize(const Eigen::VectorXd& coeffs, int j, int n_exponent,
                        FeatureTransform transform) {
  Eigen::VectorXd v = standardize_normalize(coeffs);
  switch (transform) {
    case FeatureTransform::kWeightedLog:
      v = weighted_log(v);
      break;
    case FeatureTransform::kLinear:
      break;
    case FeatureTransform::kSquared:
      v = v.array().square();
      break;
  }
  return reshape_to_matrix(v, j, n_exponent);
}

void save_feature_matrix(const std::filesystem::path& path,
                         const FeatureMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  const char magic[4] = {'G', 'L', 'F', 'T'};
  const std::uint32_t vals[4] = {static_cast<std::uint32_t>(m.j),
                                 static_cast<std::uint32_t>(m.n_exponent),
                                 static_cast<std::uint32_t>(m.values.rows()),
                                 static_cast<std::uint32_t>(m.values.cols())};
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(vals), sizeof(vals));
  for (Eigen::Index r = 0; r < m.values.rows(); ++r)
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      const float f = static_cast<float>(m.values(r, c));
      out.write(reinterpret_cast<const char*>(&f), sizeof(float));
    }
  if (!out) throw IoError("write failed: " + path.string());
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  std::uint32_t vals[4];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(vals), sizeof(vals));
  if (!in || std::memcmp(magic, "GLFT", 4) != 0)
    throw FormatError(path.string() + ": bad feature tensor header");
  FeatureMatrix m;
  m.j = static_cast<int>(vals[0]);
  m.n_exponent = static_cast<int>(vals[1]);
  const Eigen::Index rows = vals[2], cols = vals[3];
  m.values.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      float f;
      in.read(reinterpret_cast<char*>(&f), sizeof(float));
      if (!in) throw FormatError(path.string() + ": truncated tensor data");
      m.values(r, c) = static_cast<double>(f);
    }
  return m;
}

void export_feature_csv(const std::filesystem::path& path,
                        const FeatureMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  char buf[32];
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g", m.values(r, c));
      out << (c > 0 ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace gaborlens
