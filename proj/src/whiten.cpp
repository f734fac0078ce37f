// dojoba/whiten.cpp

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

#include "dojoba/whiten.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace dojoba {

Projection whiten_fit(const std::vector<Eigen::VectorXd>& vectors,
                      int d_out) {
  if (d_out < 1) throw FormatError("whiten_fit: d_out must be at least 1");
  const auto count = static_cast<int>(vectors.size());
  if (count <= d_out) {
    throw FormatError("whiten_fit: need more than " + std::to_string(d_out) +
                      " vectors, got " + std::to_string(count));
  }
  const int in_dim = static_cast<int>(vectors.front().size());
  if (d_out > in_dim) {
    throw FormatError("whiten_fit: d_out exceeds input dimension");
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(in_dim);
  for (const auto& v : vectors) {
    if (v.size() != in_dim) {
      throw FormatError("whiten_fit: inconsistent vector dimensions");
    }
    mean += v;
  }
  mean /= count;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(in_dim, in_dim);
  for (const auto& v : vectors) {
    const Eigen::VectorXd d = v - mean;
    cov += d * d.transpose();
  }
  cov /= count;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw NumericalError("whiten_fit: eigendecomposition failed");
  }
  // Ascending from Eigen; take from the back for the top components.
  const Eigen::VectorXd& evals = es.eigenvalues();
  const Eigen::MatrixXd& evecs = es.eigenvectors();
  const double top = std::max(evals[in_dim - 1], 0.0);
  const double rank_tol = top * 1e-10;
  int rank = 0;
  for (int d = 0; d < in_dim; ++d) {
    if (evals[d] > rank_tol) ++rank;
  }
  if (rank < d_out) {
    throw NumericalError("whiten_fit: requested " + std::to_string(d_out) +
                         " components but achievable rank is " +
                         std::to_string(rank));
  }
  const double eig_floor = top * 1e-12;

  Projection p;
  p.mean = std::move(mean);
  p.basis.resize(d_out, in_dim);
  p.scales.resize(d_out);
  for (int r = 0; r < d_out; ++r) {
    Eigen::VectorXd dir = evecs.col(in_dim - 1 - r);
    int peak = 0;
    dir.cwiseAbs().maxCoeff(&peak);
    if (dir[peak] < 0.0) dir = -dir;
    p.basis.row(r) = dir.transpose();
    p.scales[r] =
        1.0 / std::sqrt(std::max(evals[in_dim - 1 - r], eig_floor));
  }
  return p;
}

Eigen::VectorXd whiten_apply(const Projection& p, const Eigen::VectorXd& x) {
  if (x.size() != p.in_dim()) {
    throw FormatError("whiten_apply: expected dimension " +
                      std::to_string(p.in_dim()) + ", got " +
                      std::to_string(x.size()));
  }
  return p.scales.cwiseProduct(p.basis * (x - p.mean));
}

}  // namespace dojoba
