// dojoba/synth.cpp

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

#include "dojoba/synth.hpp"

#include <cstdio>

#include "dojoba/gaussian.hpp"
#include "dojoba/rng.hpp"

namespace dojoba {

namespace {

// Substream tags. Latent entities and samples each own a stream so the
// draw order is independent of generation order.
constexpr uint64_t kSpeakerStream = 1;
constexpr uint64_t kPhraseStream = 2;
constexpr uint64_t kNoiseStream = 3;

Eigen::VectorXd gauss_vector(Prng& rng, int dim) {
  Eigen::VectorXd z(dim);
  for (int d = 0; d < dim; ++d) z[d] = rng.next_gauss();
  return z;
}

// Draw from N(0, cov). Diagonal: per-dimension scaling; full: Cholesky
// colored. Zero variances yield exact zeros.
Eigen::VectorXd draw(Prng& rng, const Covariance& cov) {
  const int dim = cov.dim();
  Eigen::VectorXd z = gauss_vector(rng, dim);
  if (cov.is_diag()) {
    return cov.diag_values().cwiseSqrt().cwiseProduct(z);
  }
  if (cov.full_values().isZero(0.0)) {
    return Eigen::VectorXd::Zero(dim);
  }
  return cholesky_lower(cov.full_values()) * z;
}

std::string tag(const char* prefix, int n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", prefix, n);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  if (speakers < 1 || phrases < 1 || sessions < 1 || dim < 1) {
    throw FormatError("synth: speakers, phrases, sessions and dim must all "
                      "be at least 1");
  }
  if (params.dim() != dim || params.sigma_u.dim() != dim ||
      params.sigma_v.dim() != dim || params.sigma_eps.dim() != dim) {
    throw FormatError("synth: params dimension does not match spec dim");
  }
  for (const auto& [key, h] : session_overrides) {
    const auto& [i, j] = key;
    if (i < 0 || i >= speakers || j < 0 || j >= phrases || h < 1) {
      throw FormatError("synth: invalid session override");
    }
  }
}

SynthResult sample_dataset(const SynthSpec& spec) {
  spec.validate();
  SynthResult out;
  out.speaker_latents.reserve(spec.speakers);
  out.phrase_latents.reserve(spec.phrases);

  for (int i = 0; i < spec.speakers; ++i) {
    Prng rng = Prng::substream(spec.seed, kSpeakerStream, i);
    out.speaker_latents.push_back(draw(rng, spec.params.sigma_u));
  }
  for (int j = 0; j < spec.phrases; ++j) {
    Prng rng = Prng::substream(spec.seed, kPhraseStream, j);
    out.phrase_latents.push_back(draw(rng, spec.params.sigma_v));
  }

  for (int i = 0; i < spec.speakers; ++i) {
    for (int j = 0; j < spec.phrases; ++j) {
      int sessions = spec.sessions;
      if (auto it = spec.session_overrides.find({i, j});
          it != spec.session_overrides.end()) {
        sessions = it->second;
      }
      for (int k = 0; k < sessions; ++k) {
        Prng rng = Prng::substream(
            spec.seed, kNoiseStream,
            static_cast<uint64_t>(i) * spec.phrases + j, k);
        LabeledVector v;
        v.features = spec.params.mu + out.speaker_latents[i] +
                     out.phrase_latents[j] + draw(rng, spec.params.sigma_eps);
        v.speaker_id = tag("spk", i);
        v.phrase_id = tag("phr", j);
        v.session_id = tag("ses", k);
        out.data.add(std::move(v));
      }
    }
  }
  return out;
}

DojobaParams random_diag_params(int dim, uint64_t seed, double mu_scale,
                                double sigma_u_scale, double sigma_v_scale,
                                double sigma_eps_scale) {
  Prng rng = Prng::substream(seed, 0xd0d0, 0);
  DojobaParams p;
  p.mu.resize(dim);
  Eigen::VectorXd su(dim), sv(dim), se(dim);
  for (int d = 0; d < dim; ++d) p.mu[d] = mu_scale * rng.next_gauss();
  for (int d = 0; d < dim; ++d)
    su[d] = sigma_u_scale * (0.5 + rng.next_unit());
  for (int d = 0; d < dim; ++d)
    sv[d] = sigma_v_scale * (0.5 + rng.next_unit());
  for (int d = 0; d < dim; ++d)
    se[d] = sigma_eps_scale * (0.5 + rng.next_unit());
  p.sigma_u = Covariance::diag(su);
  p.sigma_v = Covariance::diag(sv);
  p.sigma_eps = Covariance::diag(se);
  return p;
}

}  // namespace dojoba
