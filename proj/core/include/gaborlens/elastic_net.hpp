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

#ifndef GABORLENS_ELASTIC_NET_HPP_
#define GABORLENS_ELASTIC_NET_HPP_

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "gaborlens/gabor.hpp"

namespace gaborlens {

// Objective, with L observations (rows of D):
//   F(a) = 1/(2L) ||x - D a||^2
//        + lambda * ((1 - alpha)/2 ||a||_2^2 + alpha ||a||_1)
struct ElasticNetConfig {
  int lambda_count = 100;        // geometric path length
  double lambda_min_ratio = 1e-4;
  double rho = 1.0;              // ADMM penalty
  double tol = 1e-4;             // relative change of z between iterations
  int max_iter = 500;            // per lambda solve
  int cv_folds = 5;
  double nonzero_threshold = 1e-6;  // relative to max |a|
};

struct SolveInfo {
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  Eigen::VectorXd coeffs;
  double lambda_selected = 0.0;
  double alpha = 0.0;
  Eigen::Index n_nonzero = 0;
  double residual_energy = 0.0;  // ||x - D a||^2
  double coeff_energy = 0.0;     // ||a||^2
  int iterations = 0;            // iterations of the final solve
  bool converged = true;
  // (lambda, mean held-out MSE), in path order (descending lambda).
  std::vector<std::pair<double, double>> cv_mse_curve;
};

// Descending geometric sequence from lmax to lmax * min_ratio.
std::vector<double> lambda_path(double lmax, int count, double min_ratio);

// Counts entries with |a_m| > threshold * max|a|; 0 for the zero vector.
Eigen::Index count_nonzero(const Eigen::VectorXd& a, double threshold);

// Solver bound to one dictionary. The a-update of ADMM and the ridge closed
// form run through a cached eigendecomposition of D D^T (and of each
// cross-validation fold's row subset), shared across all (lambda, alpha)
// and safe to use from several threads once constructed.
class ElasticNet {
 public:
  ElasticNet(const GaborDictionary& dict, ElasticNetConfig cfg);
  ElasticNet(Eigen::MatrixXd dense, ElasticNetConfig cfg);  // generic D

  ElasticNet(const ElasticNet&) = delete;
  ElasticNet& operator=(const ElasticNet&) = delete;
  ~ElasticNet();

  const ElasticNetConfig& config() const { return cfg_; }
  const Eigen::MatrixXd& dictionary() const { return *D_; }
  Eigen::Index rows() const { return D_->rows(); }
  Eigen::Index cols() const { return D_->cols(); }

  // max_m |d_m^T x| / (L * alpha); the smallest lambda with an all-zero
  // lasso solution. Requires alpha in (0, 1].
  double lambda_max(const Eigen::VectorXd& x, double alpha) const;

  // Exact solution of the alpha = 0 objective. lambda = 0 yields the
  // minimum-norm least-squares limit via the pseudoinverse.
  Eigen::VectorXd ridge_closed_form(const Eigen::VectorXd& x,
                                    double lambda) const;

  // One ADMM solve at fixed (alpha, lambda). warm_z/warm_u, when given,
  // seed and receive the solver state (for warm-started paths). trace, when
  // given, is invoked every 10 iterations with the current z.
  Eigen::VectorXd admm_solve(
      const Eigen::VectorXd& x, double alpha, double lambda,
      SolveInfo* info = nullptr, Eigen::VectorXd* warm_z = nullptr,
      Eigen::VectorXd* warm_u = nullptr,
      const std::function<void(int, const Eigen::VectorXd&)>& trace = {}) const;

  // Interleaved-fold cross-validation (sample i -> fold i % cv_folds) over
  // the shared lambda path, warm-started per fold; ties in mean held-out
  // MSE resolve toward the larger lambda.
  struct CvResult {
    double lambda = 0.0;
    int index = 0;  // position of the selected lambda within curve
    std::vector<std::pair<double, double>> curve;
  };
  CvResult cv_select_lambda(const Eigen::VectorXd& x, double alpha) const;

  // CV lambda selection followed by a warm-started full-data solve at the
  // selected lambda.
  FitResult fit(const Eigen::VectorXd& x, double alpha) const;

  double objective(const Eigen::VectorXd& x, const Eigen::VectorXd& a,
                   double alpha, double lambda) const;

 private:
  struct Factor;  // eigendecomposition of a row subset
  struct Cache;

  const Factor& full_factor() const;
  const std::vector<Factor>& fold_factors() const;
  Eigen::VectorXd solve_in_factor(
      const Factor& f, const Eigen::VectorXd& x_rows, double alpha,
      double lambda, SolveInfo* info, Eigen::VectorXd* warm_z,
      Eigen::VectorXd* warm_u,
      const std::function<void(int, const Eigen::VectorXd&)>& trace) const;
  Eigen::VectorXd ridge_in_factor(const Factor& f,
                                  const Eigen::VectorXd& qx_over,
                                  double lambda) const;

  Eigen::MatrixXd owned_;
  const Eigen::MatrixXd* D_;
  ElasticNetConfig cfg_;
  const GaborDictionary* dict_ = nullptr;
  std::unique_ptr<Cache> cache_;
};

}  // namespace gaborlens

#endif  // GABORLENS_ELASTIC_NET_HPP_
