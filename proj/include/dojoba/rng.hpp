// dojoba/rng.hpp

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

#ifndef DOJOBA_RNG_HPP
#define DOJOBA_RNG_HPP

#include <cmath>
#include <cstdint>

namespace dojoba {

// Portable counter-seeded generator (splitmix64 core, Box-Muller normals).
// The standard library engines are portable but its distributions are not
// specified bit-exactly, so fixtures sampled here are stable across
// platforms and toolchains.
//
// Stream splitting: substream(seed, a, b, c) derives an independent state
// from up to three indices. Samplers use one substream per latent entity
// and one per observation, so parallel generation order cannot change the
// output.
class Prng {
 public:
  explicit Prng(uint64_t seed) : state_(mix(seed ^ kGamma)) {}

  static Prng substream(uint64_t seed, uint64_t a, uint64_t b = 0,
                        uint64_t c = 0) {
    uint64_t h = mix(seed ^ kGamma);
    h = mix(h ^ (a + 1) * kGamma);
    h = mix(h ^ (b + 1) * kGamma);
    h = mix(h ^ (c + 1) * kGamma);
    Prng p(0);
    p.state_ = h;
    return p;
  }

  uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace dojoba

#endif  // DOJOBA_RNG_HPP
