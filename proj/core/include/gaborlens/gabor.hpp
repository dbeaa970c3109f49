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

#ifndef GABORLENS_GABOR_HPP_
#define GABORLENS_GABOR_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

namespace gaborlens {

// Grid coordinates of one atom at scale level j:
//   scale       beta  = 2^j
//   translation tau   = 2^(j-1) * p,      p in [0, 2^(N-j+1))
//   frequency   omega = 2^(-j-1) * pi * c, c in [0, 2^(j+1))
struct AtomIndex {
  int j = 0;
  int p = 0;
  int c = 0;
};

struct AtomParams {
  double beta = 0.0;
  double tau = 0.0;
  double omega = 0.0;
};

AtomParams atom_params(const AtomIndex& idx);

struct RowspaceEigen {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns are eigenvectors of D D^T
};

// Dictionary of Gaussian-windowed cosine atoms over signals of length
// L = 2^N. Atoms are unit-norm columns
//   d[n] = (gamma / sqrt(beta)) * g((n - tau)/beta) * cos(omega * (n - tau)),
//   g(u) = 2^(1/4) * exp(-pi u^2),
// with gamma normalizing over n = 0..L-1. Columns are ordered
// frequency-major: m = c * 2^(N-j+1) + p. Column count M = 2^(N+2).
//
// The dictionary is immutable after build(); the dense form and the
// eigendecomposition of D D^T are computed at most once and may be shared
// across threads.
class GaborDictionary {
 public:
  static GaborDictionary build(int j, int n_exponent, bool materialize = false);

  GaborDictionary(const GaborDictionary&) = delete;
  GaborDictionary& operator=(const GaborDictionary&) = delete;
  GaborDictionary(GaborDictionary&&) noexcept;
  GaborDictionary& operator=(GaborDictionary&&) noexcept;
  ~GaborDictionary();

  int j() const { return j_; }
  int n_exponent() const { return n_exponent_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  AtomIndex atom_index(Eigen::Index m) const;
  Eigen::Index column_of(const AtomIndex& idx) const;

  // Full-length synthesis of column m (zero outside the truncated support).
  Eigen::VectorXd atom(Eigen::Index m) const;

  // y = D a. Columns with zero coefficient are skipped, so sparse
  // coefficient vectors synthesize in time proportional to their support.
  Eigen::VectorXd apply(const Eigen::VectorXd& coeffs) const;

  // a = D^T r.
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& residual) const;

  bool materialized() const;
  const Eigen::MatrixXd& dense() const;        // materializes on first use
  const RowspaceEigen& rowspace_eigen() const;  // computed on first use

  // Columns whose raw norm fell below 1e-12 and were therefore zeroed.
  const std::vector<Eigen::Index>& degenerate_columns() const {
    return degenerate_;
  }

 private:
  GaborDictionary() = default;

  void synthesize_column(Eigen::Index m, double* out) const;  // adds into out

  int j_ = 0;
  int n_exponent_ = 0;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  int n_translations_ = 0;  // 2^(N-j+1)
  int n_frequencies_ = 0;   // 2^(j+1)
  double beta_ = 0.0;
  long support_ = 0;               // max |n - tau| kept by truncation
  std::vector<double> envelope_;   // g(delta/beta), delta = -support..support
  std::vector<double> gamma_;      // per-column normalizer (0 if degenerate)
  std::vector<Eigen::Index> degenerate_;

  struct Lazy;
  std::unique_ptr<Lazy> lazy_;
};

// Envelope truncation threshold relative to the envelope peak.
inline constexpr double kEnvelopeCut = 1e-12;

// Binary export: 16-byte header (magic "GLDC", u32 N, u32 j, u32 reserved),
// then row-major little-endian f64 entries.
void export_dictionary(const std::filesystem::path& path,
                       const GaborDictionary& dict);
Eigen::MatrixXd load_dictionary(const std::filesystem::path& path, int* j_out,
                                int* n_exponent_out);

}  // namespace gaborlens

#endif  // GABORLENS_GABOR_HPP_
