// tests/test_scoring.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dojoba/gaussian.hpp"
#include "dojoba/scoring.hpp"
#include "dojoba/synth.hpp"
#include "oracle_utils.hpp"

using dojoba::Covariance;
using dojoba::CovKind;
using dojoba::DojobaParams;
using dojoba::enroll_average;
using dojoba::FormatError;
using dojoba::HypothesisPriors;
using dojoba::JbParams;
using dojoba::Prng;
using dojoba::score_cosine;
using dojoba::score_dojoba;
using dojoba::score_jb;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}

DojobaParams unit_params(int dim) {
  DojobaParams p;
  p.mu = Eigen::VectorXd::Zero(dim);
  p.sigma_u = Covariance::diag(Eigen::VectorXd::Ones(dim));
  p.sigma_v = Covariance::diag(Eigen::VectorXd::Ones(dim));
  p.sigma_eps = Covariance::diag(Eigen::VectorXd::Ones(dim));
  return p;
}

}  // namespace

TEST_CASE("priors validate") {
  CHECK_NOTHROW(HypothesisPriors::uniform().validate());
  HypothesisPriors bad{0.5, 0.5, 0.5};
  CHECK_THROWS_AS(bad.validate(), FormatError);
  HypothesisPriors neg{-0.1, 0.6, 0.5};
  CHECK_THROWS_AS(neg.validate(), FormatError);
}

TEST_CASE("enrollment averaging") {
  CHECK(enroll_average({vec2(1, 1), vec2(1, 1), vec2(1, 1)}) == vec2(1, 1));
  CHECK(enroll_average({vec1(0.0), vec1(2.0)}) == vec1(1.0));
  CHECK_THROWS_AS(enroll_average({}), FormatError);
  CHECK_THROWS_AS(enroll_average({vec1(0.0), vec2(1, 2)}), FormatError);

  // Mean of K gaussian draws concentrates at the true mean.
  Prng rng(6);
  const int dim = 3, draws = 400;
  Eigen::VectorXd mu(dim), var(dim);
  for (int d = 0; d < dim; ++d) {
    mu[d] = rng.next_gauss();
    var[d] = 0.5 + rng.next_unit();
  }
  std::vector<Eigen::VectorXd> samples;
  for (int k = 0; k < draws; ++k) {
    Eigen::VectorXd x(dim);
    for (int d = 0; d < dim; ++d) {
      x[d] = mu[d] + std::sqrt(var[d]) * rng.next_gauss();
    }
    samples.push_back(std::move(x));
  }
  const Eigen::VectorXd mean = enroll_average(samples);
  for (int d = 0; d < dim; ++d) {
    CHECK(std::abs(mean[d] - mu[d]) < 4.0 * std::sqrt(var[d] / draws));
  }
}

TEST_CASE("degenerate model scores exactly zero") {
  DojobaParams p = unit_params(3);
  p.sigma_u = Covariance::zeros(3, CovKind::kDiag);
  p.sigma_v = Covariance::zeros(3, CovKind::kDiag);
  Prng rng(8);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd xs(3), xt(3);
    for (int d = 0; d < 3; ++d) {
      xs[d] = 3.0 * rng.next_gauss();
      xt[d] = 3.0 * rng.next_gauss();
    }
    CHECK(score_dojoba(p, xs, xt, HypothesisPriors::uniform()) == 0.0);
  }
}

TEST_CASE("hand-computed one-dimensional score") {
  // Unit sigmas at the shared mean. The four stacked 2x2 determinants are
  // 5 (same speaker and phrase), 8 (share phrase), 8 (share speaker) and
  // 9 (independent); quadratic terms vanish at the mean, so the score is
  // log[ 5^-1/2 / ((2/3) 8^-1/2 + (1/3) 9^-1/2) ].
  const double got = score_dojoba(unit_params(1), vec1(0.0), vec1(0.0),
                                  HypothesisPriors::uniform());
  CHECK(got == doctest::Approx(0.2542495217778115).epsilon(1e-12));
}

TEST_CASE("each joint probability matches Monte-Carlo integration") {
  Prng rng(10);
  DojobaParams p;
  p.mu = vec2(0.2, -0.4);
  p.sigma_u = Covariance::diag(vec2(0.8, 0.5));
  p.sigma_v = Covariance::diag(vec2(0.4, 0.7));
  p.sigma_eps = Covariance::diag(vec2(0.9, 1.2));
  const Eigen::VectorXd xs = vec2(0.7, -1.1), xt = vec2(-0.2, 0.3);

  const Covariance marginal = p.sigma_u + p.sigma_v + p.sigma_eps;
  struct Case {
    bool share_u, share_v;
    Covariance off;
  };
  const Case cases[] = {
      {true, true, p.sigma_u + p.sigma_v},
      {false, true, p.sigma_v},
      {true, false, p.sigma_u},
      {false, false, Covariance::zeros(2, CovKind::kDiag)},
  };
  for (const auto& c : cases) {
    const double closed = std::exp(
        dojoba::log_gaussian_pair(xt, xs, p.mu, marginal, c.off));
    const oracle::McEstimate mc = oracle::mc_pair_density(
        p, xt, xs, c.share_u, c.share_v, 400000, 555);
    CHECK(std::abs(closed - mc.mean) < 3.0 * mc.se);
    CHECK(mc.se < 0.05 * closed);
  }
}

TEST_CASE("zero-prior terms are dropped") {
  const DojobaParams p = unit_params(2);
  const Eigen::VectorXd xs = vec2(0.3, 0.9), xt = vec2(-0.5, 0.1);
  // Only the independent hypothesis: plain two-against-one likelihood
  // ratio, finite and well defined.
  const HypothesisPriors only_m3{0.0, 0.0, 1.0};
  CHECK(std::isfinite(score_dojoba(p, xs, xt, only_m3)));
  const HypothesisPriors only_m1{1.0, 0.0, 0.0};
  CHECK(std::isfinite(score_dojoba(p, xs, xt, only_m1)));
}

TEST_CASE("jb score identities") {
  JbParams p;
  p.mu = vec1(0.0);
  p.sigma_z = Covariance::diag(vec1(1.0));
  p.sigma_eps = Covariance::diag(vec1(1.0));
  // det(same)=3, det(diff)=4, quadratics vanish at the mean: 1/2 ln(4/3).
  CHECK(score_jb(p, vec1(0.0), vec1(0.0)) ==
        doctest::Approx(0.14384103622589046).epsilon(1e-12));

  p.sigma_z = Covariance::zeros(1, CovKind::kDiag);
  Prng rng(11);
  for (int k = 0; k < 30; ++k) {
    CHECK(score_jb(p, vec1(rng.next_gauss()), vec1(rng.next_gauss())) ==
          0.0);
  }
}

TEST_CASE("jb score is symmetric") {
  Prng rng(14);
  JbParams p;
  p.mu = vec2(0.1, -0.3);
  p.sigma_z = Covariance::diag(vec2(0.7, 1.1));
  p.sigma_eps = Covariance::diag(vec2(1.3, 0.6));
  for (int k = 0; k < 30; ++k) {
    const Eigen::VectorXd a = vec2(rng.next_gauss(), rng.next_gauss());
    const Eigen::VectorXd b = vec2(rng.next_gauss(), rng.next_gauss());
    CHECK(score_jb(p, a, b) == score_jb(p, b, a));
  }
}

TEST_CASE("cosine similarity") {
  CHECK(score_cosine(vec2(3, 4), vec2(3, 4)) == doctest::Approx(1.0));
  CHECK(score_cosine(vec2(1, 0), vec2(0, 1)) == doctest::Approx(0.0));
  CHECK(score_cosine(vec2(1, 1), vec2(1, 0)) ==
        doctest::Approx(0.7071067811865475).epsilon(1e-12));
  CHECK_THROWS_AS(score_cosine(vec2(0, 0), vec2(1, 0)), FormatError);
}

TEST_CASE("score is invariant to joint translation") {
  Prng rng(15);
  DojobaParams p = unit_params(2);
  p.sigma_u = Covariance::diag(vec2(0.9, 0.4));
  p.sigma_v = Covariance::diag(vec2(0.3, 0.8));
  const HypothesisPriors priors = HypothesisPriors::uniform();
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd xs = vec2(rng.next_gauss(), rng.next_gauss());
    const Eigen::VectorXd xt = vec2(rng.next_gauss(), rng.next_gauss());
    const Eigen::VectorXd shift = vec2(5.0 * rng.next_gauss(),
                                       5.0 * rng.next_gauss());
    DojobaParams moved = p;
    moved.mu = p.mu + shift;
    const double a = score_dojoba(p, xs, xt, priors);
    const double b = score_dojoba(moved, xs + shift, xt + shift, priors);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("p3-only scoring with zero phrase variance reduces to jb") {
  Prng rng(16);
  DojobaParams p;
  p.mu = vec2(0.4, -0.2);
  p.sigma_u = Covariance::diag(vec2(1.2, 0.5));
  p.sigma_v = Covariance::zeros(2, CovKind::kDiag);
  p.sigma_eps = Covariance::diag(vec2(0.8, 1.1));
  JbParams jb;
  jb.mu = p.mu;
  jb.sigma_z = p.sigma_u;
  jb.sigma_eps = p.sigma_eps;
  const HypothesisPriors p3_only{0.0, 0.0, 1.0};
  for (int k = 0; k < 30; ++k) {
    const Eigen::VectorXd xs = vec2(rng.next_gauss(), rng.next_gauss());
    const Eigen::VectorXd xt = vec2(rng.next_gauss(), rng.next_gauss());
    CHECK(score_dojoba(p, xs, xt, p3_only) ==
          doctest::Approx(score_jb(jb, xs, xt)).epsilon(1e-10));
  }
}

TEST_CASE("scores separate the four pair relations on synthetic trials") {
  dojoba::SynthSpec spec;
  spec.speakers = 30;
  spec.phrases = 10;
  spec.sessions = 4;
  spec.dim = 6;
  spec.seed = 99;
  spec.params = dojoba::random_diag_params(6, 42, 0.5, 1.0, 0.8, 0.8);
  const auto r = dojoba::sample_dataset(spec);
  const auto& data = r.data;
  const HypothesisPriors priors = HypothesisPriors::uniform();

  double sum_h0 = 0, sum_m1 = 0, sum_m2 = 0, sum_m3 = 0;
  std::size_t n_h0 = 0, n_m1 = 0, n_m2 = 0, n_m3 = 0;
  for (std::size_t a = 0; a < data.size(); a += 2) {
    for (std::size_t b = a + 1; b < data.size(); b += 9) {
      const double s = score_dojoba(spec.params, data.vec(a).features,
                                    data.vec(b).features, priors);
      const bool su = data.speaker_of(a) == data.speaker_of(b);
      const bool sv = data.phrase_of(a) == data.phrase_of(b);
      if (su && sv) {
        sum_h0 += s;
        ++n_h0;
      } else if (!su && sv) {
        sum_m1 += s;
        ++n_m1;
      } else if (su && !sv) {
        sum_m2 += s;
        ++n_m2;
      } else {
        sum_m3 += s;
        ++n_m3;
      }
    }
  }
  REQUIRE(n_h0 + n_m1 + n_m2 + n_m3 > 10000);
  REQUIRE(n_h0 > 100);
  const double mean_h0 = sum_h0 / n_h0, mean_m1 = sum_m1 / n_m1;
  const double mean_m2 = sum_m2 / n_m2, mean_m3 = sum_m3 / n_m3;
  CHECK(mean_h0 > mean_m1);
  CHECK(mean_h0 > mean_m2);
  CHECK(mean_m1 > mean_m3);
  CHECK(mean_m2 > mean_m3);
}

TEST_CASE("full-kind covariances score like their diagonal equivalents") {
  Prng rng(17);
  DojobaParams diag;
  diag.mu = vec2(0.3, -0.6);
  diag.sigma_u = Covariance::diag(vec2(1.1, 0.4));
  diag.sigma_v = Covariance::diag(vec2(0.5, 0.9));
  diag.sigma_eps = Covariance::diag(vec2(0.8, 1.3));
  DojobaParams full;
  full.mu = diag.mu;
  full.sigma_u = Covariance::full(diag.sigma_u.dense());
  full.sigma_v = Covariance::full(diag.sigma_v.dense());
  full.sigma_eps = Covariance::full(diag.sigma_eps.dense());
  const HypothesisPriors priors = HypothesisPriors::uniform();
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd xs = vec2(rng.next_gauss(), rng.next_gauss());
    const Eigen::VectorXd xt = vec2(rng.next_gauss(), rng.next_gauss());
    CHECK(score_dojoba(full, xs, xt, priors) ==
          doctest::Approx(score_dojoba(diag, xs, xt, priors))
              .epsilon(1e-10));
  }

  JbParams jb_diag{diag.mu, diag.sigma_u, diag.sigma_eps};
  JbParams jb_full{full.mu, full.sigma_u, full.sigma_eps};
  CHECK(score_jb(jb_full, vec2(0.1, 0.2), vec2(-0.4, 0.6)) ==
        doctest::Approx(score_jb(jb_diag, vec2(0.1, 0.2), vec2(-0.4, 0.6)))
            .epsilon(1e-10));
}

TEST_CASE("scores stay finite for healthy models") {
  Prng rng(18);
  const DojobaParams p = unit_params(4);
  const HypothesisPriors priors = HypothesisPriors::uniform();
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd xs(4), xt(4);
    for (int d = 0; d < 4; ++d) {
      xs[d] = 20.0 * rng.next_gauss();
      xt[d] = 20.0 * rng.next_gauss();
    }
    CHECK(std::isfinite(score_dojoba(p, xs, xt, priors)));
  }
}

TEST_CASE("score is symmetric in the two inputs") {
  Prng rng(19);
  DojobaParams p = unit_params(3);
  const HypothesisPriors priors = HypothesisPriors::uniform();
  for (int k = 0; k < 30; ++k) {
    Eigen::VectorXd xs(3), xt(3);
    for (int d = 0; d < 3; ++d) {
      xs[d] = rng.next_gauss();
      xt[d] = rng.next_gauss();
    }
    CHECK(score_dojoba(p, xs, xt, priors) ==
          score_dojoba(p, xt, xs, priors));
  }
}
