// dojoba/scoring.hpp

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

#ifndef DOJOBA_SCORING_HPP
#define DOJOBA_SCORING_HPP

#include <functional>
#include <vector>

#include "dojoba/types.hpp"

namespace dojoba {

// Priors over the three ways a nontarget pair can differ: p1 = different
// speaker/same phrase, p2 = same speaker/different phrase, p3 = both
// differ. Each must be nonnegative and they must sum to 1 within 1e-12.
struct HypothesisPriors {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 1.0;

  // 1/3 each, constructed so the doubles sum to exactly 1.0.
  static HypothesisPriors uniform();
  void validate() const;
};

// Element-wise mean of the enrollment vectors.
Eigen::VectorXd enroll_average(const std::vector<Eigen::VectorXd>& vectors);

// Log likelihood ratio of "same speaker and phrase" against the prior
// mixture of the three mismatch hypotheses. Symmetric in (x_s, x_t);
// zero-prior terms are dropped from the mixture.
double score_dojoba(const DojobaParams& params, const Eigen::VectorXd& x_s,
                    const Eigen::VectorXd& x_t,
                    const HypothesisPriors& priors);

// Single-latent log likelihood ratio: same class against independent.
double score_jb(const JbParams& params, const Eigen::VectorXd& x_s,
                const Eigen::VectorXd& x_t);

// Cosine similarity in [-1, 1]; rejects zero vectors.
double score_cosine(const Eigen::VectorXd& x_s, const Eigen::VectorXd& x_t);

// (enrollment model, test vector) -> score.
using Scorer =
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

Scorer make_dojoba_scorer(DojobaParams params, HypothesisPriors priors);
Scorer make_jb_scorer(JbParams params);
Scorer make_cosine_scorer();

}  // namespace dojoba

#endif  // DOJOBA_SCORING_HPP
