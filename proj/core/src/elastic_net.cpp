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

#include "gaborlens/elastic_net.hpp"

#include <cmath>
#include <mutex>

#include "gaborlens/error.hpp"

namespace gaborlens {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw PreconditionError("elastic net: alpha must be in [0, 1]");
}

void soft_threshold(const Eigen::VectorXd& v, double kappa,
                    Eigen::VectorXd& out) {
  out.resize(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = v[i];
    if (a > kappa)
      out[i] = a - kappa;
    else if (a < -kappa)
      out[i] = a + kappa;
    else
      out[i] = 0.0;
  }
}

}  // namespace

std::vector<double> lambda_path(double lmax, int count, double min_ratio) {
  if (!(lmax > 0.0)) throw PreconditionError("lambda_path: lmax must be > 0");
  if (count < 1) throw PreconditionError("lambda_path: count must be >= 1");
  if (!(min_ratio > 0.0 && min_ratio <= 1.0))
    throw PreconditionError("lambda_path: min_ratio must be in (0, 1]");
  std::vector<double> path(static_cast<std::size_t>(count));
  if (count == 1) {
    path[0] = lmax;
    return path;
  }
  for (int i = 0; i < count; ++i)
    path[static_cast<std::size_t>(i)] =
        lmax * std::pow(min_ratio, static_cast<double>(i) / (count - 1));
  return path;
}

Eigen::Index count_nonzero(const Eigen::VectorXd& a, double threshold) {
  const double peak = a.cwiseAbs().maxCoeff();
  if (peak <= 0.0) return 0;
  const double cut = threshold * peak;
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) > cut) ++n;
  return n;
}

// Eigendecomposition of D_rows D_rows^T for one row subset, with the
// projected dictionary P = Q^T D_rows. The ADMM a-update
//   a = (D^T D / n + sigma I)^{-1} v
// then reduces (matrix-inversion lemma) to
//   a = (v - P^T diag(1/(sigma n + evals)) P v) / sigma,
// two (n x M) products per iteration regardless of lambda/alpha/rho.
struct ElasticNet::Factor {
  Eigen::MatrixXd P;      // n_rows x M
  Eigen::MatrixXd Q;      // n_rows x n_rows
  Eigen::VectorXd evals;  // of D_rows D_rows^T, ascending
  Eigen::MatrixXd D_out;  // held-out rows (empty for the full factor)
  std::vector<int> in_rows, out_rows;
  Eigen::Index n_rows = 0;
};

struct ElasticNet::Cache {
  std::once_flag full_once, folds_once;
  std::unique_ptr<Factor> full;
  std::vector<Factor> folds;
};

ElasticNet::ElasticNet(const GaborDictionary& dict, ElasticNetConfig cfg)
    : D_(&dict.dense()), cfg_(cfg), dict_(&dict),
      cache_(std::make_unique<Cache>()) {}

ElasticNet::~ElasticNet() = default;

ElasticNet::ElasticNet(Eigen::MatrixXd dense, ElasticNetConfig cfg)
    : owned_(std::move(dense)), D_(&owned_), cfg_(cfg),
      cache_(std::make_unique<Cache>()) {
  if (owned_.rows() < 1 || owned_.cols() < 1)
    throw PreconditionError("elastic net: empty dictionary");
}

const ElasticNet::Factor& ElasticNet::full_factor() const {
  std::call_once(cache_->full_once, [this] {
    auto f = std::make_unique<Factor>();
    f->n_rows = D_->rows();
    if (dict_ != nullptr) {
      const RowspaceEigen& eig = dict_->rowspace_eigen();
      f->Q = eig.eigenvectors;
      f->evals = eig.eigenvalues;
    } else {
      Eigen::MatrixXd gram = (*D_) * D_->transpose();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
      if (es.info() != Eigen::Success)
        throw NumericError("elastic net: eigendecomposition failed");
      f->Q = es.eigenvectors();
      f->evals = es.eigenvalues();
    }
    f->P.noalias() = f->Q.transpose() * (*D_);
    cache_->full = std::move(f);
  });
  return *cache_->full;
}

const std::vector<ElasticNet::Factor>& ElasticNet::fold_factors() const {
  std::call_once(cache_->folds_once, [this] {
    const int folds = cfg_.cv_folds;
    const Eigen::Index L = D_->rows();
    if (folds < 2)
      throw PreconditionError("elastic net: cv_folds must be >= 2");
    if (static_cast<Eigen::Index>(folds) > L)
      throw PreconditionError(
          "elastic net: a cross-validation fold would be empty");
    std::vector<Factor> out(static_cast<std::size_t>(folds));
    for (int fold = 0; fold < folds; ++fold) {
      Factor& f = out[static_cast<std::size_t>(fold)];
      for (Eigen::Index i = 0; i < L; ++i) {
        if (static_cast<int>(i % folds) == fold)
          f.out_rows.push_back(static_cast<int>(i));
        else
          f.in_rows.push_back(static_cast<int>(i));
      }
      f.n_rows = static_cast<Eigen::Index>(f.in_rows.size());
      Eigen::MatrixXd Din = (*D_)(f.in_rows, Eigen::all);
      Eigen::MatrixXd gram = Din * Din.transpose();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
      if (es.info() != Eigen::Success)
        throw NumericError("elastic net: fold eigendecomposition failed");
      f.Q = es.eigenvectors();
      f.evals = es.eigenvalues();
      f.P.noalias() = f.Q.transpose() * Din;
      f.D_out = (*D_)(f.out_rows, Eigen::all);
    }
    cache_->folds = std::move(out);
  });
  return cache_->folds;
}

double ElasticNet::lambda_max(const Eigen::VectorXd& x, double alpha) const {
  if (x.size() != D_->rows())
    throw PreconditionError("lambda_max: signal length mismatch");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw PreconditionError("lambda_max: alpha must be in (0, 1]");
  const double peak = (D_->transpose() * x).cwiseAbs().maxCoeff();
  return peak / (static_cast<double>(D_->rows()) * alpha);
}

Eigen::VectorXd ElasticNet::ridge_in_factor(const Factor& f,
                                            const Eigen::VectorXd& qx,
                                            double lambda) const {
  const double n = static_cast<double>(f.n_rows);
  Eigen::VectorXd w(f.evals.size());
  if (lambda > 0.0) {
    for (Eigen::Index i = 0; i < w.size(); ++i)
      w[i] = qx[i] / (f.evals[i] + lambda * n);
  } else {
    // Pseudoinverse limit: minimum-norm least squares.
    const double cut = f.evals.size() > 0
                           ? f.evals[f.evals.size() - 1] * 1e-12
                           : 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      w[i] = f.evals[i] > cut ? qx[i] / f.evals[i] : 0.0;
  }
  return f.P.transpose() * w;
}

Eigen::VectorXd ElasticNet::ridge_closed_form(const Eigen::VectorXd& x,
                                              double lambda) const {
  if (x.size() != D_->rows())
    throw PreconditionError("ridge: signal length mismatch");
  if (lambda < 0.0) throw PreconditionError("ridge: lambda must be >= 0");
  const Factor& f = full_factor();
  const Eigen::VectorXd qx = f.Q.transpose() * x;
  return ridge_in_factor(f, qx, lambda);
}

Eigen::VectorXd ElasticNet::solve_in_factor(
    const Factor& f, const Eigen::VectorXd& x_rows, double alpha,
    double lambda, SolveInfo* info, Eigen::VectorXd* warm_z,
    Eigen::VectorXd* warm_u,
    const std::function<void(int, const Eigen::VectorXd&)>& trace) const {
  const Eigen::Index M = D_->cols();
  const double n = static_cast<double>(f.n_rows);
  const Eigen::VectorXd qx = f.Q.transpose() * x_rows;

  if (lambda == 0.0) {
    // No penalty: the objective's minimum is the least-squares set; return
    // its minimum-norm element exactly. Plain ADMM iteration stalls here
    // because the near-null eigenmodes of an overcomplete dictionary
    // contract at a rate arbitrarily close to 1.
    Eigen::VectorXd z = ridge_in_factor(f, qx, 0.0);
    if (warm_z != nullptr) *warm_z = z;
    if (warm_u != nullptr) warm_u->setZero(M);
    if (info != nullptr) *info = SolveInfo{0, true};
    return z;
  }

  const double rho = cfg_.rho;
  const double kappa = lambda * alpha / rho;
  const double sigma = lambda * (1.0 - alpha) + rho;
  const Eigen::VectorXd c = f.P.transpose() * qx / n;
  // Stationarity bound for the all-zero vector: 0 minimizes the objective
  // iff ||D^T x / n||_inf <= lambda * alpha (the l2 term has zero gradient
  // at 0). The slack absorbs the one-ulp rounding between this product and
  // a lambda derived from the same correlations.
  const double zero_is_optimal_bound = lambda * alpha * (1.0 + 1e-9);
  const double c_inf = c.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd dinv(f.evals.size());
  for (Eigen::Index i = 0; i < dinv.size(); ++i)
    dinv[i] = 1.0 / (sigma * n + f.evals[i]);

  Eigen::VectorXd z = (warm_z != nullptr && warm_z->size() == M)
                          ? *warm_z
                          : Eigen::VectorXd::Zero(M);
  Eigen::VectorXd u = (warm_u != nullptr && warm_u->size() == M)
                          ? *warm_u
                          : Eigen::VectorXd::Zero(M);

  Eigen::VectorXd v(M), t(f.evals.size()), a(M), z_new(M);
  SolveInfo result;
  for (int k = 1; k <= cfg_.max_iter; ++k) {
    result.iterations = k;
    v = c + rho * (z - u);
    t.noalias() = f.P * v;
    t.array() *= dinv.array();
    a = v;
    a.noalias() -= f.P.transpose() * t;
    a /= sigma;
    soft_threshold(a + u, kappa, z_new);
    u += a - z_new;
    const double denom = std::max(z.norm(), 1e-12);
    const double change = (z_new - z).norm() / denom;
    z.swap(z_new);
    if (trace && k % 10 == 0) trace(k, z);
    if (change < cfg_.tol) {
      // The relative-change rule is blind while the soft threshold pins z
      // at exactly zero: z can sit still for several iterations while the
      // scaled dual variable u is still accumulating toward the threshold.
      // Accept a zero iterate only when zero really is stationary;
      // otherwise keep iterating until z unfreezes.
      if (z.norm() > 0.0 || c_inf <= zero_is_optimal_bound) {
        result.converged = true;
        break;
      }
    }
  }
  if (!z.allFinite())
    throw NumericError("elastic net: ADMM produced non-finite coefficients");
  if (warm_z != nullptr) *warm_z = z;
  if (warm_u != nullptr) *warm_u = u;
  if (info != nullptr) *info = result;
  return z;
}

Eigen::VectorXd ElasticNet::admm_solve(
    const Eigen::VectorXd& x, double alpha, double lambda, SolveInfo* info,
    Eigen::VectorXd* warm_z, Eigen::VectorXd* warm_u,
    const std::function<void(int, const Eigen::VectorXd&)>& trace) const {
  if (x.size() != D_->rows())
    throw PreconditionError("admm_solve: signal length mismatch");
  if (!x.allFinite()) throw NumericError("admm_solve: non-finite input");
  check_alpha(alpha);
  if (lambda < 0.0) throw PreconditionError("admm_solve: lambda must be >= 0");
  return solve_in_factor(full_factor(), x, alpha, lambda, info, warm_z,
                         warm_u, trace);
}

ElasticNet::CvResult ElasticNet::cv_select_lambda(const Eigen::VectorXd& x,
                                                  double alpha) const {
  if (x.size() != D_->rows())
    throw PreconditionError("cv_select_lambda: signal length mismatch");
  if (!x.allFinite())
    throw NumericError("cv_select_lambda: non-finite input");
  check_alpha(alpha);

  double lmax = 0.0;
  {
    // alpha = 0 has no finite all-zero threshold; use the alpha = 0.001
    // surrogate to anchor the path.
    const double a_eff = alpha > 0.0 ? alpha : 0.001;
    lmax = lambda_max(x, a_eff);
  }
  if (!(lmax > 0.0)) lmax = 1.0;  // degenerate input, e.g. x = 0

  const std::vector<double> path =
      lambda_path(lmax, cfg_.lambda_count, cfg_.lambda_min_ratio);
  std::vector<double> mse(path.size(), 0.0);

  const std::vector<Factor>& folds = fold_factors();
  for (const Factor& f : folds) {
    const Eigen::VectorXd x_in = x(f.in_rows);
    const Eigen::VectorXd x_out = x(f.out_rows);
    const double n_out = static_cast<double>(f.out_rows.size());
    if (alpha == 0.0) {
      const Eigen::VectorXd qx = f.Q.transpose() * x_in;
      for (std::size_t li = 0; li < path.size(); ++li) {
        const Eigen::VectorXd a = ridge_in_factor(f, qx, path[li]);
        mse[li] += (x_out - f.D_out * a).squaredNorm() / n_out;
      }
    } else {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(D_->cols());
      Eigen::VectorXd u = Eigen::VectorXd::Zero(D_->cols());
      for (std::size_t li = 0; li < path.size(); ++li) {
        solve_in_factor(f, x_in, alpha, path[li], nullptr, &z, &u, {});
        mse[li] += (x_out - f.D_out * z).squaredNorm() / n_out;
      }
    }
  }

  CvResult result;
  result.curve.reserve(path.size());
  std::size_t best = 0;
  for (std::size_t li = 0; li < path.size(); ++li) {
    const double m = mse[li] / static_cast<double>(folds.size());
    result.curve.emplace_back(path[li], m);
    // Strict comparison: ties resolve to the earliest (largest) lambda.
    if (m < result.curve[best].second) best = li;
  }
  result.lambda = path[best];
  result.index = static_cast<int>(best);
  return result;
}

FitResult ElasticNet::fit(const Eigen::VectorXd& x, double alpha) const {
  const CvResult cv = cv_select_lambda(x, alpha);

  FitResult r;
  r.alpha = alpha;
  r.lambda_selected = cv.lambda;
  r.cv_mse_curve = cv.curve;

  SolveInfo info{0, true};
  if (alpha == 0.0) {
    r.coeffs = ridge_closed_form(x, cv.lambda);
  } else {
    // Warm-started descent along the path prefix down to the selection.
    const Factor& f = full_factor();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(D_->cols());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(D_->cols());
    for (int li = 0; li <= cv.index; ++li)
      solve_in_factor(f, x, alpha, cv.curve[static_cast<std::size_t>(li)].first,
                      &info, &z, &u, {});
    r.coeffs = std::move(z);
  }
  r.iterations = info.iterations;
  r.converged = info.converged;
  r.residual_energy = (x - (*D_) * r.coeffs).squaredNorm();
  r.coeff_energy = r.coeffs.squaredNorm();
  r.n_nonzero = count_nonzero(r.coeffs, cfg_.nonzero_threshold);
  return r;
}

double ElasticNet::objective(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& a, double alpha,
                             double lambda) const {
  const double L = static_cast<double>(D_->rows());
  const double fidelity = (x - (*D_) * a).squaredNorm() / (2.0 * L);
  const double l2 = 0.5 * (1.0 - alpha) * a.squaredNorm();
  const double l1 = alpha * a.template lpNorm<1>();
  return fidelity + lambda * (l2 + l1);
}

}  // namespace gaborlens
