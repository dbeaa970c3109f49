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

#include "gaborlens/gabor.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>

#include "gaborlens/error.hpp"

namespace gaborlens {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarterPow2 = 1.1892071150027210667;  // 2^(1/4)

void check_grid(int j, int n_exponent) {
  if (n_exponent < 3 || n_exponent > 20)
    throw PreconditionError("gabor: n_exponent out of range [3, 20]");
  if (j < 1 || j > n_exponent - 1)
    throw PreconditionError("gabor: j must satisfy 1 <= j <= N-1, got j=" +
                            std::to_string(j) + " N=" +
                            std::to_string(n_exponent));
}

}  // namespace

struct GaborDictionary::Lazy {
  std::once_flag dense_once;
  std::once_flag eig_once;
  Eigen::MatrixXd dense;
  std::optional<RowspaceEigen> eig;
};

GaborDictionary::GaborDictionary(GaborDictionary&&) noexcept = default;
GaborDictionary& GaborDictionary::operator=(GaborDictionary&&) noexcept =
    default;
GaborDictionary::~GaborDictionary() = default;

AtomParams atom_params(const AtomIndex& idx) {
  AtomParams p;
  p.beta = std::pow(2.0, idx.j);
  p.tau = std::pow(2.0, idx.j - 1) * idx.p;
  p.omega = std::pow(2.0, -idx.j - 1) * kPi * idx.c;
  return p;
}

GaborDictionary GaborDictionary::build(int j, int n_exponent,
                                       bool materialize) {
  check_grid(j, n_exponent);

  GaborDictionary d;
  d.j_ = j;
  d.n_exponent_ = n_exponent;
  d.rows_ = Eigen::Index{1} << n_exponent;
  d.n_translations_ = 1 << (n_exponent - j + 1);
  d.n_frequencies_ = 1 << (j + 1);
  d.cols_ = static_cast<Eigen::Index>(d.n_translations_) * d.n_frequencies_;
  d.beta_ = std::pow(2.0, j);
  d.lazy_ = std::make_unique<Lazy>();

  // Truncate where the Gaussian falls below kEnvelopeCut of its peak.
  const double u_max = std::sqrt(std::log(1.0 / kEnvelopeCut) / kPi);
  d.support_ = static_cast<long>(std::floor(d.beta_ * u_max));

  const double prefactor = kQuarterPow2 / std::sqrt(d.beta_);
  d.envelope_.resize(2 * d.support_ + 1);
  for (long delta = -d.support_; delta <= d.support_; ++delta) {
    const double u = static_cast<double>(delta) / d.beta_;
    d.envelope_[static_cast<std::size_t>(delta + d.support_)] =
        prefactor * std::exp(-kPi * u * u);
  }

  // Per-column normalizers; the norm is taken over n = 0..L-1 only, so
  // edge-truncated atoms are renormalized to unit length.
  d.gamma_.assign(static_cast<std::size_t>(d.cols_), 0.0);
  const long tau_step = 1L << (j - 1);
  for (int p = 0; p < d.n_translations_; ++p) {
    const long tau = tau_step * p;
    const long lo = std::max(tau - d.support_, 0L);
    const long hi = std::min(tau + d.support_, static_cast<long>(d.rows_) - 1);
    for (int c = 0; c < d.n_frequencies_; ++c) {
      const double omega = std::pow(2.0, -j - 1) * kPi * c;
      double norm_sq = 0.0;
      for (long n = lo; n <= hi; ++n) {
        const long delta = n - tau;
        const double v =
            d.envelope_[static_cast<std::size_t>(delta + d.support_)] *
            std::cos(omega * static_cast<double>(delta));
        norm_sq += v * v;
      }
      const Eigen::Index m =
          static_cast<Eigen::Index>(c) * d.n_translations_ + p;
      const double norm = std::sqrt(norm_sq);
      if (norm < 1e-12) {
        d.degenerate_.push_back(m);  // zero column; kept to preserve indexing
      } else {
        d.gamma_[static_cast<std::size_t>(m)] = 1.0 / norm;
      }
    }
  }

  if (materialize) d.dense();
  return d;
}

AtomIndex GaborDictionary::atom_index(Eigen::Index m) const {
  if (m < 0 || m >= cols_)
    throw PreconditionError("gabor: column index out of range");
  AtomIndex idx;
  idx.j = j_;
  idx.c = static_cast<int>(m / n_translations_);
  idx.p = static_cast<int>(m % n_translations_);
  return idx;
}

Eigen::Index GaborDictionary::column_of(const AtomIndex& idx) const {
  if (idx.j != j_)
    throw PreconditionError("gabor: atom index belongs to another scale");
  if (idx.p < 0 || idx.p >= n_translations_ || idx.c < 0 ||
      idx.c >= n_frequencies_)
    throw PreconditionError("gabor: atom grid coordinates out of range");
  return static_cast<Eigen::Index>(idx.c) * n_translations_ + idx.p;
}

void GaborDictionary::synthesize_column(Eigen::Index m, double* out) const {
  const double gamma = gamma_[static_cast<std::size_t>(m)];
  if (gamma == 0.0) return;  // degenerate column
  const int c = static_cast<int>(m / n_translations_);
  const int p = static_cast<int>(m % n_translations_);
  const long tau = (1L << (j_ - 1)) * p;
  const double omega = std::pow(2.0, -j_ - 1) * kPi * c;
  const long lo = std::max(tau - support_, 0L);
  const long hi = std::min(tau + support_, static_cast<long>(rows_) - 1);
  for (long n = lo; n <= hi; ++n) {
    const long delta = n - tau;
    out[n] += gamma *
              envelope_[static_cast<std::size_t>(delta + support_)] *
              std::cos(omega * static_cast<double>(delta));
  }
}

Eigen::VectorXd GaborDictionary::atom(Eigen::Index m) const {
  if (m < 0 || m >= cols_)
    throw PreconditionError("gabor: column index out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(rows_);
  synthesize_column(m, v.data());
  return v;
}

Eigen::VectorXd GaborDictionary::apply(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != cols_)
    throw PreconditionError("gabor: coefficient vector has wrong size");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  if (materialized()) {
    y.noalias() = lazy_->dense * coeffs;
    return y;
  }
  Eigen::VectorXd column(rows_);
  for (Eigen::Index m = 0; m < cols_; ++m) {
    const double a = coeffs[m];
    if (a == 0.0) continue;
    column.setZero();
    synthesize_column(m, column.data());
    y += a * column;
  }
  return y;
}

Eigen::VectorXd GaborDictionary::apply_adjoint(
    const Eigen::VectorXd& residual) const {
  if (residual.size() != rows_)
    throw PreconditionError("gabor: residual vector has wrong size");
  if (materialized()) return lazy_->dense.transpose() * residual;

  Eigen::VectorXd a = Eigen::VectorXd::Zero(cols_);
  const long tau_step = 1L << (j_ - 1);
  for (int c = 0; c < n_frequencies_; ++c) {
    const double omega = std::pow(2.0, -j_ - 1) * kPi * c;
    for (int p = 0; p < n_translations_; ++p) {
      const Eigen::Index m =
          static_cast<Eigen::Index>(c) * n_translations_ + p;
      const double gamma = gamma_[static_cast<std::size_t>(m)];
      if (gamma == 0.0) continue;
      const long tau = tau_step * p;
      const long lo = std::max(tau - support_, 0L);
      const long hi = std::min(tau + support_, static_cast<long>(rows_) - 1);
      double acc = 0.0;
      for (long n = lo; n <= hi; ++n) {
        const long delta = n - tau;
        acc += residual[n] *
               envelope_[static_cast<std::size_t>(delta + support_)] *
               std::cos(omega * static_cast<double>(delta));
      }
      a[m] = gamma * acc;
    }
  }
  return a;
}

bool GaborDictionary::materialized() const {
  return lazy_->dense.size() != 0;
}

const Eigen::MatrixXd& GaborDictionary::dense() const {
  std::call_once(lazy_->dense_once, [this] {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows_, cols_);
    for (Eigen::Index m = 0; m < cols_; ++m)
      synthesize_column(m, D.col(m).data());
    lazy_->dense = std::move(D);
  });
  return lazy_->dense;
}

const RowspaceEigen& GaborDictionary::rowspace_eigen() const {
  std::call_once(lazy_->eig_once, [this] {
    const Eigen::MatrixXd& D = dense();
    Eigen::MatrixXd gram = D * D.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
      throw NumericError("gabor: eigendecomposition of D D^T failed");
    RowspaceEigen r;
    r.eigenvalues = es.eigenvalues();
    r.eigenvectors = es.eigenvectors();
    lazy_->eig = std::move(r);
  });
  return *lazy_->eig;
}

void export_dictionary(const std::filesystem::path& path,
                       const GaborDictionary& dict) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  const char magic[4] = {'G', 'L', 'D', 'C'};
  const std::uint32_t n = static_cast<std::uint32_t>(dict.n_exponent());
  const std::uint32_t j = static_cast<std::uint32_t>(dict.j());
  const std::uint32_t reserved = 0;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&j), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  const Eigen::MatrixXd& D = dict.dense();
  std::vector<double> row(static_cast<std::size_t>(D.cols()));
  for (Eigen::Index r = 0; r < D.rows(); ++r) {
    for (Eigen::Index c = 0; c < D.cols(); ++c)
      row[static_cast<std::size_t>(c)] = D(r, c);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXd load_dictionary(const std::filesystem::path& path, int* j_out,
                                int* n_exponent_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  std::uint32_t n = 0, j = 0, reserved = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&j), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  if (!in || std::memcmp(magic, "GLDC", 4) != 0)
    throw FormatError(path.string() + ": bad dictionary header");
  const Eigen::Index rows = Eigen::Index{1} << n;
  const Eigen::Index cols = Eigen::Index{1} << (n + 2);
  Eigen::MatrixXd D(rows, cols);
  std::vector<double> row(static_cast<std::size_t>(cols));
  for (Eigen::Index r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw FormatError(path.string() + ": truncated dictionary data");
    for (Eigen::Index c = 0; c < cols; ++c)
      D(r, c) = row[static_cast<std::size_t>(c)];
  }
  if (j_out != nullptr) *j_out = static_cast<int>(j);
  if (n_exponent_out != nullptr) *n_exponent_out = static_cast<int>(n);
  return D;
}

}  // namespace gaborlens
