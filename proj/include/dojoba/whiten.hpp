// dojoba/whiten.hpp

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

#ifndef DOJOBA_WHITEN_HPP
#define DOJOBA_WHITEN_HPP

#include <vector>

#include "dojoba/types.hpp"

namespace dojoba {

// PCA whitening transform: x -> scales .* (basis * (x - mean)). Rows of
// basis are orthonormal principal directions, scales make the projected
// training covariance unit.
struct Projection {
  Eigen::VectorXd mean;    // D_in
  Eigen::MatrixXd basis;   // D_out x D_in
  Eigen::VectorXd scales;  // D_out

  int in_dim() const { return static_cast<int>(mean.size()); }
  int out_dim() const { return static_cast<int>(scales.size()); }
};

// Eigen-decomposition of the sample covariance; keeps the top d_out
// components with unit-variance scaling (eigenvalue-floored). Each basis
// row's largest-magnitude entry is made positive so fixtures are stable
// across eigen-solvers. Throws when the achievable rank is below d_out.
Projection whiten_fit(const std::vector<Eigen::VectorXd>& vectors,
                      int d_out);

Eigen::VectorXd whiten_apply(const Projection& p, const Eigen::VectorXd& x);

}  // namespace dojoba

#endif  // DOJOBA_WHITEN_HPP
