// dojoba/gaussian.cpp

// Copyright 2026 The dojoba Authors
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

#include "dojoba/gaussian.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "dojoba/common.hpp"

namespace dojoba {

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  // Redo by hand to locate the failing pivot for the error message.
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double pivot = m(k, k) - l.row(k).head(k).squaredNorm();
    if (pivot <= 0.0 || !std::isfinite(pivot)) {
      throw NumericalError(
          "cholesky: matrix not positive definite at pivot " +
          std::to_string(k) + " (value " + std::to_string(pivot) + ")");
    }
    l(k, k) = std::sqrt(pivot);
    for (int r = k + 1; r < n; ++r) {
      l(r, k) =
          (m(r, k) - l.row(r).head(k).dot(l.row(k).head(k))) / l(k, k);
    }
  }
  return l;
}

double log_gaussian_dense(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(x.size());
  const Eigen::MatrixXd l = cholesky_lower(cov);
  const Eigen::VectorXd w =
      l.triangularView<Eigen::Lower>().solve(x - mean);
  double log_det = 0.0;
  for (int k = 0; k < n; ++k) log_det += std::log(l(k, k));
  return -0.5 * (n * kLog2Pi + w.squaredNorm()) - log_det;
}

double log_gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                    const Covariance& cov) {
  if (x.size() != mean.size() || cov.dim() != x.size()) {
    throw FormatError("log_gaussian: dimension mismatch");
  }
  if (cov.is_diag()) {
    const Eigen::VectorXd& var = cov.diag_values();
    double acc = 0.0;
    for (int d = 0; d < var.size(); ++d) {
      if (var[d] <= 0.0) {
        throw NumericalError(
            "log_gaussian: non-positive variance at dimension " +
            std::to_string(d));
      }
      const double r = x[d] - mean[d];
      acc += kLog2Pi + std::log(var[d]) + r * r / var[d];
    }
    return -0.5 * acc;
  }
  return log_gaussian_dense(x, mean, cov.full_values());
}

namespace {

// One 2x2 block [[a, c], [c, a]]: log density of (dt, ds) about zero.
inline double log_pair_block(double a, double c, double dt, double ds,
                             int dimension) {
  const double det = a * a - c * c;
  if (det <= 0.0 || a <= 0.0) {
    throw NumericalError(
        "log_gaussian_pair: 2x2 block not positive definite at dimension " +
        std::to_string(dimension));
  }
  const double cross = dt * ds;  // single rounding keeps the swap exact
  const double quad = (a * (dt * dt + ds * ds) - 2.0 * c * cross) / det;
  return -kLog2Pi - 0.5 * (std::log(det) + quad);
}

}  // namespace

double log_gaussian_pair(const Eigen::VectorXd& x_t,
                         const Eigen::VectorXd& x_s,
                         const Eigen::VectorXd& mu,
                         const Covariance& diag_block,
                         const Covariance& off_block) {
  const int dim = static_cast<int>(mu.size());
  if (x_t.size() != dim || x_s.size() != dim || diag_block.dim() != dim ||
      off_block.dim() != dim) {
    throw FormatError("log_gaussian_pair: dimension mismatch");
  }
  if (diag_block.is_diag() && off_block.is_diag()) {
    const Eigen::VectorXd& a = diag_block.diag_values();
    const Eigen::VectorXd& c = off_block.diag_values();
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
      acc += log_pair_block(a[d], c[d], x_t[d] - mu[d], x_s[d] - mu[d], d);
    }
    return acc;
  }

  Eigen::MatrixXd joint(2 * dim, 2 * dim);
  joint.topLeftCorner(dim, dim) = diag_block.dense();
  joint.bottomRightCorner(dim, dim) = diag_block.dense();
  joint.topRightCorner(dim, dim) = off_block.dense();
  joint.bottomLeftCorner(dim, dim) = off_block.dense();
  Eigen::VectorXd stacked(2 * dim), stacked_mean(2 * dim);
  stacked << x_t, x_s;
  stacked_mean << mu, mu;
  return log_gaussian_dense(stacked, stacked_mean, joint);
}

}  // namespace dojoba
