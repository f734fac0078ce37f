// dojoba/types.cpp

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

#include "dojoba/types.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace dojoba {

Covariance Covariance::diag(Eigen::VectorXd variances) {
  Covariance c;
  c.kind_ = CovKind::kDiag;
  c.diag_ = std::move(variances);
  for (int d = 0; d < c.diag_.size(); ++d) {
    if (!std::isfinite(c.diag_[d])) {
      throw NumericalError("covariance: non-finite variance at dimension " +
                           std::to_string(d));
    }
  }
  return c;
}

Covariance Covariance::full(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw FormatError("covariance: matrix is not square");
  }
  if (!m.allFinite()) {
    throw NumericalError("covariance: non-finite entries");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-12 * scale) {
    throw FormatError("covariance: matrix is not symmetric (relative "
                      "asymmetry " + std::to_string(asym / scale) + ")");
  }
  Covariance c;
  c.kind_ = CovKind::kFull;
  c.full_ = 0.5 * (m + m.transpose());
  return c;
}

Covariance Covariance::zeros(int dim, CovKind kind) {
  if (kind == CovKind::kDiag) return diag(Eigen::VectorXd::Zero(dim));
  return full(Eigen::MatrixXd::Zero(dim, dim));
}

int Covariance::dim() const {
  return kind_ == CovKind::kDiag ? static_cast<int>(diag_.size())
                                 : static_cast<int>(full_.rows());
}

const Eigen::VectorXd& Covariance::diag_values() const {
  if (kind_ != CovKind::kDiag) {
    throw NumericalError("covariance: diagonal payload requested from full "
                         "matrix");
  }
  return diag_;
}

const Eigen::MatrixXd& Covariance::full_values() const {
  if (kind_ != CovKind::kFull) {
    throw NumericalError("covariance: full payload requested from diagonal");
  }
  return full_;
}

Eigen::MatrixXd Covariance::dense() const {
  if (kind_ == CovKind::kDiag) {
    return Eigen::MatrixXd(diag_.asDiagonal());
  }
  return full_;
}

Eigen::VectorXd Covariance::diagonal() const {
  return kind_ == CovKind::kDiag ? diag_ : Eigen::VectorXd(full_.diagonal());
}

double Covariance::trace() const {
  return kind_ == CovKind::kDiag ? diag_.sum() : full_.trace();
}

Covariance Covariance::floored(double floor) const {
  if (kind_ == CovKind::kDiag) {
    return diag(diag_.cwiseMax(floor));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full_);
  if (es.info() != Eigen::Success) {
    throw NumericalError("covariance: eigendecomposition failed in floor");
  }
  const Eigen::VectorXd vals = es.eigenvalues().cwiseMax(floor);
  return full(es.eigenvectors() * vals.asDiagonal() *
              es.eigenvectors().transpose());
}

double Covariance::min_variance() const {
  if (dim() == 0) return 0.0;
  if (kind_ == CovKind::kDiag) return diag_.minCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full_);
  return es.eigenvalues().minCoeff();
}

Covariance operator+(const Covariance& a, const Covariance& b) {
  if (a.dim() != b.dim()) {
    throw FormatError("covariance: dimension mismatch in addition");
  }
  if (a.kind_ == CovKind::kDiag && b.kind_ == CovKind::kDiag) {
    return Covariance::diag(a.diag_ + b.diag_);
  }
  return Covariance::full(a.dense() + b.dense());
}

Covariance operator-(const Covariance& a, const Covariance& b) {
  if (a.dim() != b.dim()) {
    throw FormatError("covariance: dimension mismatch in subtraction");
  }
  if (a.kind_ == CovKind::kDiag && b.kind_ == CovKind::kDiag) {
    return Covariance::diag(a.diag_ - b.diag_);
  }
  return Covariance::full(a.dense() - b.dense());
}

void Dataset::add(LabeledVector v) {
  if (!v.features.allFinite()) {
    throw FormatError("dataset: non-finite feature value in session '" +
                      v.session_id + "'");
  }
  if (vectors_.empty()) {
    dim_ = static_cast<int>(v.features.size());
    if (dim_ == 0) throw FormatError("dataset: empty feature vector");
  } else if (v.features.size() != dim_) {
    throw FormatError("dataset: dimension mismatch, expected " +
                      std::to_string(dim_) + " got " +
                      std::to_string(v.features.size()));
  }

  auto [si, s_new] =
      speaker_index_.try_emplace(v.speaker_id, num_speakers());
  if (s_new) {
    speaker_ids_.push_back(v.speaker_id);
    speaker_items_.emplace_back();
  }
  auto [pi, p_new] = phrase_index_.try_emplace(v.phrase_id, num_phrases());
  if (p_new) {
    phrase_ids_.push_back(v.phrase_id);
    phrase_items_.emplace_back();
  }
  const int i = si->second, j = pi->second;

  auto& members = pair_items_[{i, j}];
  for (std::size_t n : members) {
    if (vectors_[n].session_id == v.session_id) {
      throw FormatError("dataset: duplicate session '" + v.session_id +
                        "' for speaker '" + v.speaker_id + "' phrase '" +
                        v.phrase_id + "'");
    }
  }

  const std::size_t idx = vectors_.size();
  members.push_back(idx);
  speaker_items_[i].push_back(idx);
  phrase_items_[j].push_back(idx);
  speaker_of_.push_back(i);
  phrase_of_.push_back(j);
  vectors_.push_back(std::move(v));
}

int Dataset::sessions(int i, int j) const {
  auto it = pair_items_.find({i, j});
  return it == pair_items_.end() ? 0 : static_cast<int>(it->second.size());
}

Eigen::VectorXd Dataset::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
  for (const auto& v : vectors_) m += v.features;
  if (!vectors_.empty()) m /= static_cast<double>(vectors_.size());
  return m;
}

namespace {

void check_component(const char* name, const Covariance& c, int dim) {
  if (c.dim() != dim) {
    throw FormatError(std::string("params: ") + name +
                      " dimension does not match mu");
  }
}

}  // namespace

void DojobaParams::validate() const {
  check_component("sigma_u", sigma_u, dim());
  check_component("sigma_v", sigma_v, dim());
  check_component("sigma_eps", sigma_eps, dim());
  if (sigma_eps.min_variance() <= 0.0) {
    throw NumericalError("params: sigma_eps is not positive definite");
  }
}

void JbParams::validate() const {
  check_component("sigma_z", sigma_z, dim());
  check_component("sigma_eps", sigma_eps, dim());
  if (sigma_eps.min_variance() <= 0.0) {
    throw NumericalError("params: sigma_eps is not positive definite");
  }
}

}  // namespace dojoba
