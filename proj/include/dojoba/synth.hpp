// dojoba/synth.hpp

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

#ifndef DOJOBA_SYNTH_HPP
#define DOJOBA_SYNTH_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "dojoba/types.hpp"

namespace dojoba {

// Sampling plan: I speakers x J phrases, `sessions` vectors per pair
// (overridable per pair), drawn from ground-truth params.
struct SynthSpec {
  int speakers = 1;
  int phrases = 1;
  int sessions = 1;
  std::map<Dataset::PairKey, int> session_overrides;
  int dim = 1;
  DojobaParams params;
  uint64_t seed = 0;

  void validate() const;
};

// The realized latents come back alongside the data so recovery tests can
// compare estimates against what was actually drawn.
struct SynthResult {
  Dataset data;
  std::vector<Eigen::VectorXd> speaker_latents;  // u_i
  std::vector<Eigen::VectorXd> phrase_latents;   // v_j
};

// x_ijk = mu + u_i + v_j + eps_ijk with u_i ~ N(0, sigma_u) drawn once per
// speaker, v_j ~ N(0, sigma_v) once per phrase, eps fresh per sample.
// Deterministic given the seed; one RNG substream per latent entity and per
// sample. Zero covariances are allowed and produce degenerate draws.
SynthResult sample_dataset(const SynthSpec& spec);

// Convenience for tests and the CLI: a diagonal ground truth with variances
// drawn uniformly from the given ranges, derived deterministically from the
// seed.
DojobaParams random_diag_params(int dim, uint64_t seed, double mu_scale = 1.0,
                                double sigma_u_scale = 1.0,
                                double sigma_v_scale = 1.0,
                                double sigma_eps_scale = 1.0);

}  // namespace dojoba

#endif  // DOJOBA_SYNTH_HPP
