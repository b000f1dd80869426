// Copyright 2026 The harbench Authors.
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

#include "harbench/ridge.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "harbench/parallel.hpp"

namespace harbench::ridge {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ColMatrix = Eigen::MatrixXd;

// Symmetric eigendecomposition in place: on return `a` (n x n, column-major)
// holds the eigenvectors as columns and `w` the eigenvalues, ascending.
void symmetric_eigen(ColMatrix& a, Eigen::VectorXd& w) {
  const auto n = static_cast<lapack_int>(a.rows());
  w.resize(a.rows());
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
  if (info != 0) throw Error(Errc::DegenerateFeatures, "eigendecomposition failed, info " + std::to_string(info));
}

struct Standardized {
  RowMatrix x;  // n x kept
  std::vector<std::size_t> kept;
  std::vector<double> mean, scale;
};

Standardized standardize(const MatrixF& z) {
  const std::size_t n = z.rows(), d = z.cols();
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = z.row(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = z.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = row[j] - mean[j];
      var[j] += dv * dv;
    }
  }
  Standardized s;
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    if (sd > 1e-12) {
      s.kept.push_back(j);
      s.mean.push_back(mean[j]);
      s.scale.push_back(sd);
    }
  }
  if (s.kept.empty()) throw Error(Errc::DegenerateFeatures, "every feature column is constant");
  s.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(s.kept.size()));
  parallel_for(n, [&](std::size_t i) {
    const auto row = z.row(i);
    for (std::size_t k = 0; k < s.kept.size(); ++k) {
      s.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (row[s.kept[k]] - s.mean[k]) / s.scale[k];
    }
  });
  return s;
}

// X X^T for row-major X, returned column-major with the lower triangle set
// (the layout dsyevd reads).
ColMatrix gram(const RowMatrix& x) {
  const auto n = static_cast<int>(x.rows()), p = static_cast<int>(x.cols());
  ColMatrix g(n, n);
  // Row-major upper == column-major lower.
  cblas_dsyrk(CblasRowMajor, CblasUpper, CblasNoTrans, n, p, 1.0, x.data(), p, 0.0, g.data(), n);
  return g;
}

// X^T X, column-major lower.
ColMatrix covariance(const RowMatrix& x) {
  const auto n = static_cast<int>(x.rows()), p = static_cast<int>(x.cols());
  ColMatrix c(p, p);
  cblas_dsyrk(CblasColMajor, CblasLower, CblasNoTrans, p, n, 1.0, x.data(), p, 0.0, c.data(), p);
  return c;
}

struct Solution {
  double lambda = 0;
  std::vector<double> errors;
  Eigen::MatrixXd weights;  // p x K
};

// n <= p: work in the dual. The intercept direction (the eigenvector closest
// to the constant vector) is left unpenalized, which makes the residuals
// c_i / diag(G^-1)_ii the exact leave-one-out residuals of the model with an
// intercept.
Solution solve_dual(const RowMatrix& x, const Eigen::MatrixXd& y, std::span<const double> lambdas) {
  const Eigen::Index n = x.rows();
  ColMatrix q = gram(x);
  Eigen::VectorXd eig;
  symmetric_eigen(q, eig);

  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::Index intercept_dim = 0;
  (q.transpose() * ones).cwiseAbs().maxCoeff(&intercept_dim);

  const Eigen::MatrixXd qty = q.transpose() * y;  // n x K
  const Eigen::MatrixXd q_sq = q.cwiseAbs2();

  Solution best;
  best.errors.reserve(lambdas.size());
  double best_err = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_c;
  for (double lambda : lambdas) {
    Eigen::VectorXd inv = (eig.array() + lambda).inverse().matrix();
    inv(intercept_dim) = 0.0;
    const Eigen::MatrixXd c = q * (inv.asDiagonal() * qty);
    const Eigen::VectorXd g_diag = q_sq * inv;
    const Eigen::MatrixXd loo = c.array().colwise() / g_diag.array();
    const double err = loo.squaredNorm() / static_cast<double>(loo.size());
    best.errors.push_back(err);
    if (err < best_err) {
      best_err = err;
      best.lambda = lambda;
      best_c = c;
    }
  }
  best.weights = x.transpose() * best_c;
  return best;
}

// n > p: work in the primal with hat-matrix leverages (plus 1/n for the
// intercept of centered data).
Solution solve_primal(const RowMatrix& x, const Eigen::MatrixXd& y, std::span<const double> lambdas) {
  const Eigen::Index n = x.rows();
  ColMatrix v = covariance(x);
  Eigen::VectorXd eig;
  symmetric_eigen(v, eig);

  const Eigen::MatrixXd xv = x * v;               // n x p
  const Eigen::MatrixXd vtxty = xv.transpose() * y;  // p x K
  const Eigen::MatrixXd xv_sq = xv.cwiseAbs2();

  Solution best;
  double best_err = std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    const Eigen::VectorXd inv = (eig.array() + lambda).inverse().matrix();
    const Eigen::MatrixXd coef = inv.asDiagonal() * vtxty;  // rotated weights
    const Eigen::MatrixXd resid = y - xv * coef;
    const Eigen::VectorXd leverage = (xv_sq * inv).array() + 1.0 / static_cast<double>(n);
    const Eigen::MatrixXd loo = resid.array().colwise() / (1.0 - leverage.array());
    const double err = loo.squaredNorm() / static_cast<double>(loo.size());
    best.errors.push_back(err);
    if (err < best_err) {
      best_err = err;
      best.lambda = lambda;
      best.weights = v * coef;
    }
  }
  return best;
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / 9.0));
  return grid;
}

RidgeHead fit_ridge(const MatrixF& features, std::span<const int> labels, const RidgeOptions& options) {
  const std::size_t n = features.rows();
  if (n == 0) throw Error(Errc::EmptyTrainingSet, "ridge fit on zero rows");
  if (labels.size() != n) throw Error(Errc::DimensionMismatch, "labels and feature rows differ");
  if (options.lambdas.empty()) throw Error(Errc::InvalidArgument, "empty lambda grid");
  for (double l : options.lambdas) {
    if (!(l > 0)) throw Error(Errc::InvalidArgument, "lambda values must be positive");
  }

  RidgeHead head;
  head.classes.assign(labels.begin(), labels.end());
  std::sort(head.classes.begin(), head.classes.end());
  head.classes.erase(std::unique(head.classes.begin(), head.classes.end()), head.classes.end());
  if (head.classes.size() < 2) throw Error(Errc::SingleClass, "ridge head needs at least two classes");
  const auto k = static_cast<Eigen::Index>(head.classes.size());

  Standardized s = standardize(features);
  head.input_dim = features.cols();
  head.kept = std::move(s.kept);
  head.mean = std::move(s.mean);
  head.scale = std::move(s.scale);

  Eigen::MatrixXd y(static_cast<Eigen::Index>(n), k);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      y(static_cast<Eigen::Index>(i), c) = labels[i] == head.classes[static_cast<std::size_t>(c)] ? 1.0 : -1.0;
    }
  }
  const Eigen::RowVectorXd y_mean = y.colwise().mean();
  y.rowwise() -= y_mean;

  const Solution sol = (static_cast<Eigen::Index>(n) <= s.x.cols()) ? solve_dual(s.x, y, options.lambdas)
                                                                   : solve_primal(s.x, y, options.lambdas);
  head.lambda = sol.lambda;
  head.lambdas = options.lambdas;
  head.loo_errors = sol.errors;
  head.weights = MatrixD(head.kept.size(), head.classes.size());
  for (std::size_t j = 0; j < head.kept.size(); ++j) {
    for (Eigen::Index c = 0; c < k; ++c) {
      head.weights(j, static_cast<std::size_t>(c)) = sol.weights(static_cast<Eigen::Index>(j), c);
    }
  }
  head.intercept.assign(y_mean.data(), y_mean.data() + k);
  return head;
}

MatrixD decision_function(const RidgeHead& head, const MatrixF& features) {
  if (features.cols() != head.input_dim) {
    throw Error(Errc::DimensionMismatch, "feature width " + std::to_string(features.cols()) + ", head expects " +
                                             std::to_string(head.input_dim));
  }
  const std::size_t k = head.classes.size();
  MatrixD scores(features.rows(), k);
  parallel_for(features.rows(), [&](std::size_t i) {
    const auto row = features.row(i);
    auto out = scores.row(i);
    for (std::size_t c = 0; c < k; ++c) out[c] = head.intercept[c];
    for (std::size_t j = 0; j < head.kept.size(); ++j) {
      const double v = (row[head.kept[j]] - head.mean[j]) / head.scale[j];
      const auto w = head.weights.row(j);
      for (std::size_t c = 0; c < k; ++c) out[c] += v * w[c];
    }
  });
  return scores;
}

std::vector<int> predict_labels(const RidgeHead& head, const MatrixD& scores) {
  std::vector<int> out(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto row = scores.row(i);
    const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    out[i] = head.classes[best];
  }
  return out;
}

}  // namespace harbench::ridge
