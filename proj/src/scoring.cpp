// dojoba/scoring.cpp

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

#include "dojoba/scoring.hpp"

#include <cmath>

#include "dojoba/gaussian.hpp"

namespace dojoba {

HypothesisPriors HypothesisPriors::uniform() {
  HypothesisPriors p;
  p.p1 = 1.0 / 3.0;
  p.p2 = 1.0 / 3.0;
  p.p3 = 1.0 - 2.0 / 3.0;  // the three sum to exactly 1.0
  return p;
}

void HypothesisPriors::validate() const {
  if (p1 < 0.0 || p2 < 0.0 || p3 < 0.0) {
    throw FormatError("priors: negative prior probability");
  }
  if (std::abs(p1 + p2 + p3 - 1.0) > 1e-12) {
    throw FormatError("priors: probabilities must sum to 1");
  }
}

Eigen::VectorXd enroll_average(
    const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.empty()) {
    throw FormatError("enroll_average: empty enrollment list");
  }
  Eigen::VectorXd mean = vectors.front();
  for (std::size_t k = 1; k < vectors.size(); ++k) {
    if (vectors[k].size() != mean.size()) {
      throw FormatError("enroll_average: dimension mismatch");
    }
    mean += vectors[k];
  }
  return mean / static_cast<double>(vectors.size());
}

double score_dojoba(const DojobaParams& params, const Eigen::VectorXd& x_s,
                    const Eigen::VectorXd& x_t,
                    const HypothesisPriors& priors) {
  priors.validate();
  const int dim = params.dim();
  if (x_s.size() != dim || x_t.size() != dim) {
    throw FormatError("score_dojoba: vector dimension does not match model");
  }
  const Covariance marginal =
      params.sigma_u + params.sigma_v + params.sigma_eps;
  const Covariance shared = params.sigma_u + params.sigma_v;
  const Covariance none = Covariance::zeros(dim, marginal.kind());

  // All four joint densities share the marginal diagonal block and differ
  // only in the off-diagonal one. Working relative to the numerator keeps
  // the coincident-density case exactly zero.
  const double log_same =
      log_gaussian_pair(x_t, x_s, params.mu, marginal, shared);
  const double d1 =
      log_gaussian_pair(x_t, x_s, params.mu, marginal, params.sigma_v) -
      log_same;
  const double d2 =
      log_gaussian_pair(x_t, x_s, params.mu, marginal, params.sigma_u) -
      log_same;
  const double d3 =
      log_gaussian_pair(x_t, x_s, params.mu, marginal, none) - log_same;

  double shift = 0.0;
  bool any = false;
  auto consider = [&](double p, double d) {
    if (p <= 0.0) return;
    shift = any ? std::max(shift, d) : d;
    any = true;
  };
  consider(priors.p1, d1);
  consider(priors.p2, d2);
  consider(priors.p3, d3);

  double mix = 0.0;
  if (priors.p1 > 0.0) mix += priors.p1 * std::exp(d1 - shift);
  if (priors.p2 > 0.0) mix += priors.p2 * std::exp(d2 - shift);
  if (priors.p3 > 0.0) mix += priors.p3 * std::exp(d3 - shift);
  return -(shift + std::log(mix));
}

double score_jb(const JbParams& params, const Eigen::VectorXd& x_s,
                const Eigen::VectorXd& x_t) {
  const int dim = params.dim();
  if (x_s.size() != dim || x_t.size() != dim) {
    throw FormatError("score_jb: vector dimension does not match model");
  }
  const Covariance marginal = params.sigma_z + params.sigma_eps;
  const Covariance none = Covariance::zeros(dim, marginal.kind());
  // The independent hypothesis is the same stacked system with a zero
  // off-diagonal block, so a zero sigma_z cancels exactly.
  return log_gaussian_pair(x_t, x_s, params.mu, marginal, params.sigma_z) -
         log_gaussian_pair(x_t, x_s, params.mu, marginal, none);
}

double score_cosine(const Eigen::VectorXd& x_s, const Eigen::VectorXd& x_t) {
  if (x_s.size() != x_t.size()) {
    throw FormatError("score_cosine: dimension mismatch");
  }
  const double ns = x_s.norm(), nt = x_t.norm();
  if (ns == 0.0 || nt == 0.0) {
    throw FormatError("score_cosine: zero vector");
  }
  return x_s.dot(x_t) / (ns * nt);
}

Scorer make_dojoba_scorer(DojobaParams params, HypothesisPriors priors) {
  priors.validate();
  params.validate();
  return [params = std::move(params), priors](const Eigen::VectorXd& model,
                                              const Eigen::VectorXd& test) {
    return score_dojoba(params, model, test, priors);
  };
}

Scorer make_jb_scorer(JbParams params) {
  params.validate();
  return [params = std::move(params)](const Eigen::VectorXd& model,
                                      const Eigen::VectorXd& test) {
    return score_jb(params, model, test);
  };
}

Scorer make_cosine_scorer() {
  return [](const Eigen::VectorXd& model, const Eigen::VectorXd& test) {
    return score_cosine(model, test);
  };
}

}  // namespace dojoba
