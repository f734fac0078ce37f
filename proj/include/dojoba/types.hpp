// dojoba/types.hpp

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

#ifndef DOJOBA_TYPES_HPP
#define DOJOBA_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dojoba/common.hpp"

namespace dojoba {

enum class CovKind { kDiag, kFull };

// Symmetric covariance, either a D-vector of per-dimension variances or a
// dense D x D matrix. Full matrices are symmetrized on construction and
// rejected if the relative asymmetry exceeds 1e-12.
class Covariance {
 public:
  Covariance() = default;

  static Covariance diag(Eigen::VectorXd variances);
  static Covariance full(const Eigen::MatrixXd& m);
  static Covariance zeros(int dim, CovKind kind);

  CovKind kind() const { return kind_; }
  bool is_diag() const { return kind_ == CovKind::kDiag; }
  int dim() const;

  // Diagonal-kind payload.
  const Eigen::VectorXd& diag_values() const;
  // Full-kind payload.
  const Eigen::MatrixXd& full_values() const;

  Eigen::MatrixXd dense() const;
  Eigen::VectorXd diagonal() const;
  double trace() const;

  // Clamps variances (diagonal kind) or eigenvalues (full kind) from below.
  Covariance floored(double floor) const;

  // Smallest variance (diagonal kind) or eigenvalue (full kind).
  double min_variance() const;

  friend Covariance operator+(const Covariance& a, const Covariance& b);
  friend Covariance operator-(const Covariance& a, const Covariance& b);

 private:
  CovKind kind_ = CovKind::kDiag;
  Eigen::VectorXd diag_;
  Eigen::MatrixXd full_;
};

// One feature vector tagged with its speaker, phrase and session labels.
struct LabeledVector {
  Eigen::VectorXd features;
  std::string speaker_id;
  std::string phrase_id;
  std::string session_id;
};

// Indexed vector collection. Speakers and phrases get dense indices in
// first-seen order; every stored vector is addressable as the k'th session
// of (speaker i, phrase j). Construction-phase add(), immutable afterwards.
class Dataset {
 public:
  using PairKey = std::pair<int, int>;

  // Validates finiteness, dimension consistency and uniqueness of the
  // (speaker, phrase, session) triple.
  void add(LabeledVector v);

  std::size_t size() const { return vectors_.size(); }
  int dim() const { return dim_; }
  int num_speakers() const { return static_cast<int>(speaker_ids_.size()); }
  int num_phrases() const { return static_cast<int>(phrase_ids_.size()); }

  const LabeledVector& vec(std::size_t n) const { return vectors_[n]; }
  const std::vector<LabeledVector>& vectors() const { return vectors_; }

  int speaker_of(std::size_t n) const { return speaker_of_[n]; }
  int phrase_of(std::size_t n) const { return phrase_of_[n]; }

  const std::string& speaker_id(int i) const { return speaker_ids_[i]; }
  const std::string& phrase_id(int j) const { return phrase_ids_[j]; }

  const std::vector<std::size_t>& speaker_items(int i) const {
    return speaker_items_[i];
  }
  const std::vector<std::size_t>& phrase_items(int j) const {
    return phrase_items_[j];
  }

  // (i, j) -> member indices, ordered by pair key.
  const std::map<PairKey, std::vector<std::size_t>>& pairs() const {
    return pair_items_;
  }

  // H_ij; zero when the pair never occurs.
  int sessions(int i, int j) const;

  Eigen::VectorXd mean() const;

 private:
  int dim_ = 0;
  std::vector<LabeledVector> vectors_;
  std::vector<std::string> speaker_ids_, phrase_ids_;
  std::map<std::string, int> speaker_index_, phrase_index_;
  std::vector<int> speaker_of_, phrase_of_;
  std::vector<std::vector<std::size_t>> speaker_items_, phrase_items_;
  std::map<PairKey, std::vector<std::size_t>> pair_items_;
};

// Two-latent model parameters: x = mu + u_speaker + v_phrase + eps.
struct DojobaParams {
  Eigen::VectorXd mu;
  Covariance sigma_u;
  Covariance sigma_v;
  Covariance sigma_eps;

  int dim() const { return static_cast<int>(mu.size()); }
  // Shapes agree and sigma_eps is strictly positive definite.
  void validate() const;
};

// Single-latent baseline parameters: x = mu + z_class + eps.
struct JbParams {
  Eigen::VectorXd mu;
  Covariance sigma_z;
  Covariance sigma_eps;

  int dim() const { return static_cast<int>(mu.size()); }
  void validate() const;
};

}  // namespace dojoba

#endif  // DOJOBA_TYPES_HPP
