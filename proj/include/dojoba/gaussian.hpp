// dojoba/gaussian.hpp

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

#ifndef DOJOBA_GAUSSIAN_HPP
#define DOJOBA_GAUSSIAN_HPP

#include <Eigen/Dense>

#include "dojoba/types.hpp"

namespace dojoba {

// log N(x | mean, cov) via triangular factorization. Diagonal covariances
// are evaluated dimension-by-dimension; full ones through a Cholesky solve.
// Throws NumericalError naming the offending dimension/pivot when cov is
// not positive definite.
double log_gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                    const Covariance& cov);

// Log density of the stacked vector [x_t; x_s] under mean [mu; mu] and
// block covariance [[A, C], [C, A]] with A = diag_block, C = off_block.
// When both blocks are diagonal this reduces to D independent 2x2 systems
// and runs in O(D); otherwise the 2D x 2D matrix is assembled and factored.
double log_gaussian_pair(const Eigen::VectorXd& x_t,
                         const Eigen::VectorXd& x_s,
                         const Eigen::VectorXd& mu,
                         const Covariance& diag_block,
                         const Covariance& off_block);

// Lower-triangular Cholesky factor. Throws NumericalError naming the
// failing pivot when the matrix is not positive definite.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m);

// log N(x | mean, cov) for a dense covariance given directly; used where a
// covariance exists only as an assembled matrix (stacked systems, the
// exact-likelihood evaluator).
double log_gaussian_dense(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov);

}  // namespace dojoba

#endif  // DOJOBA_GAUSSIAN_HPP
