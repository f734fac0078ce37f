// dojoba/em.hpp

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

#ifndef DOJOBA_EM_HPP
#define DOJOBA_EM_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dojoba/types.hpp"

namespace dojoba {

// How the speaker/phrase covariance updates are normalized: by the total
// sample count (each class weighted by its sample count) or by the number
// of distinct classes.
enum class MStepNormalization { kTotalSamples, kPerClass };

struct FitConfig {
  int iterations = 10;
  CovKind cov_kind = CovKind::kDiag;
  // Absolute variance floor; each estimated covariance is additionally
  // floored at 1e-8 x trace/D of itself.
  double variance_floor = 1e-10;
  uint64_t seed = 0;
  MStepNormalization normalization = MStepNormalization::kTotalSamples;
  // Holds sigma_v at the floor and skips its update: the single-latent
  // constrained path the jb baseline delegates to.
  bool pin_sigma_v = false;
  // When positive, stop once the max parameter change drops below this.
  double early_stop_delta = 0.0;
  // Record the exact marginal log-likelihood per iteration when tractable
  // (diagonal covariances, sample count within the guard); otherwise the
  // per-pair surrogate is recorded.
  bool record_exact_loglik = true;
};

// Posterior expectations accumulated by the E step. Diagonal mode fills the
// *_diag members, full mode the *_full ones.
struct EStats {
  CovKind kind = CovKind::kDiag;
  int dim = 0;

  // Per speaker: E[u_i] and E[u_i u_i^T], conditioned on the previous
  // iteration's phrase expectations.
  std::vector<Eigen::VectorXd> eu;
  std::vector<Eigen::VectorXd> euu_diag;
  std::vector<Eigen::MatrixXd> euu_full;

  // Per phrase, symmetric roles.
  std::vector<Eigen::VectorXd> ev;
  std::vector<Eigen::VectorXd> evv_diag;
  std::vector<Eigen::MatrixXd> evv_full;

  // Per (speaker, phrase) pair: E[u_i v_j^T] from the pair-local joint
  // posterior over (u, v).
  std::map<Dataset::PairKey, Eigen::VectorXd> euv_diag;
  std::map<Dataset::PairKey, Eigen::MatrixXd> euv_full;

  // Bookkeeping: samples per speaker and per phrase.
  std::vector<int> speaker_counts;
  std::vector<int> phrase_counts;

  bool empty() const { return eu.empty() && ev.empty(); }
};

struct FitDiagnostics {
  // Marginal log-likelihood after each iteration's M step: exact when
  // tractable, else the per-pair surrogate (see loglik_is_exact).
  std::vector<double> loglik;
  // Max absolute parameter change per iteration.
  std::vector<double> param_delta;
  bool loglik_is_exact = false;
  int iterations_run = 0;
};

// Joint posterior over (u_i, v_j) given only pair (i, j)'s sessions: the
// 2x2-block linear-Gaussian system. Diagonal mode carries per-dimension
// 2x2 covariances, full mode the assembled 2D x 2D one.
struct PairPosterior {
  Eigen::VectorXd mean_u, mean_v;
  Eigen::VectorXd cov_uu, cov_vv, cov_uv;  // diagonal mode
  Eigen::MatrixXd cov_full;                // full mode, [u; v] ordering
};

// Moment-matching initialization: mu = grand mean, sigma_u/sigma_v from
// speaker/phrase mean scatter, sigma_eps from the double-centered
// residual, each floored to positive definite.
DojobaParams init_params(const Dataset& data, const FitConfig& cfg);

// One E step. `prev` supplies the previous iteration's E[u_i]/E[v_j]
// (zeros when empty): the speaker update conditions on the previous phrase
// expectations and vice versa.
EStats e_step(const Dataset& data, const DojobaParams& params,
              const EStats& prev);

PairPosterior pair_posterior(const Dataset& data, const DojobaParams& params,
                             int speaker, int phrase);

// One M step over the accumulated stats. params_old supplies shape/kind
// context; cfg controls normalization, flooring and pinning.
DojobaParams m_step(const Dataset& data, const EStats& stats,
                    const DojobaParams& params_old, const FitConfig& cfg);

std::pair<DojobaParams, FitDiagnostics> fit(const Dataset& data,
                                            const FitConfig& cfg);

// Exact log p(X | params) for diagonal models: per dimension, the dense
// N x N covariance induced by shared speaker/phrase latents is assembled
// and factored. Guarded to N <= exact_loglik_sample_guard().
double exact_marginal_loglik(const Dataset& data, const DojobaParams& params);

int exact_loglik_sample_guard();

// Marginal log-likelihood under the approximation that every (speaker,
// phrase) pair has independent latents; cheap and exact per pair.
double pair_surrogate_loglik(const Dataset& data, const DojobaParams& params);

// The effective floor applied to an estimated covariance.
double effective_floor(const Covariance& estimated, const FitConfig& cfg);

}  // namespace dojoba

#endif  // DOJOBA_EM_HPP
