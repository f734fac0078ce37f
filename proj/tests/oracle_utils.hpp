// tests/oracle_utils.hpp

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

// Independent test oracles. These deliberately avoid the library's density
// and sweep code paths: extended-precision direct formulas, brute-force
// threshold grids and Monte-Carlo integration.

#ifndef DOJOBA_TESTS_ORACLE_UTILS_HPP
#define DOJOBA_TESTS_ORACLE_UTILS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dojoba/rng.hpp"
#include "dojoba/types.hpp"

namespace oracle {

// Dense long-double matrix in row-major order.
struct MatLd {
  int n = 0;
  std::vector<long double> a;

  long double& at(int r, int c) { return a[r * n + c]; }
  long double at(int r, int c) const { return a[r * n + c]; }

  static MatLd zero(int n) {
    MatLd m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0L);
    return m;
  }
};

// Gauss-Jordan with partial pivoting; returns the inverse and determinant.
inline MatLd invert(const MatLd& in, long double* det_out) {
  const int n = in.n;
  MatLd work = in;
  MatLd inv = MatLd::zero(n);
  for (int d = 0; d < n; ++d) inv.at(d, d) = 1.0L;
  long double det = 1.0L;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs((double)work.at(r, col)) >
          std::fabs((double)work.at(pivot, col))) {
        pivot = r;
      }
    }
    if (work.at(pivot, col) == 0.0L) {
      throw std::runtime_error("oracle: singular matrix");
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(work.at(pivot, c), work.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
      det = -det;
    }
    const long double p = work.at(col, col);
    det *= p;
    for (int c = 0; c < n; ++c) {
      work.at(col, c) /= p;
      inv.at(col, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = work.at(r, col);
      if (f == 0.0L) continue;
      for (int c = 0; c < n; ++c) {
        work.at(r, c) -= f * work.at(col, c);
        inv.at(r, c) -= f * inv.at(col, c);
      }
    }
  }
  if (det_out != nullptr) *det_out = det;
  return inv;
}

// -1/2 (n ln 2pi + ln det S + q^T S^{-1} q) evaluated directly in extended
// precision with an explicit inverse and determinant.
inline double direct_log_gaussian(const std::vector<double>& x,
                                  const std::vector<double>& mean,
                                  const MatLd& cov) {
  const int n = cov.n;
  long double det = 0.0L;
  const MatLd inv = invert(cov, &det);
  if (det <= 0.0L) throw std::runtime_error("oracle: non-positive det");
  long double quad = 0.0L;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      quad += (x[r] - mean[r]) * inv.at(r, c) * (x[c] - mean[c]);
    }
  }
  const long double log2pi = 1.837877066409345483560659472811L;
  return static_cast<double>(-0.5L * (n * log2pi + std::log(det) + quad));
}

struct BruteEer {
  double eer_percent = 0.0;
  double threshold = 0.0;
};

// Exhaustive fine-grid threshold sweep: FAR(t) = fraction of nontargets
// >= t, FRR(t) = fraction of targets < t, crossing interpolated between
// the two bracketing grid points.
inline BruteEer brute_force_eer(std::vector<double> targets,
                                std::vector<double> nontargets,
                                double step = 1e-4) {
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());
  const double lo =
      std::min(targets.front(), nontargets.front()) - 2.0 * step;
  const double hi = std::max(targets.back(), nontargets.back()) + 2.0 * step;
  auto far_at = [&](double t) {
    const auto below =
        std::lower_bound(nontargets.begin(), nontargets.end(), t) -
        nontargets.begin();
    return static_cast<double>(nontargets.size() - below) / nontargets.size();
  };
  auto frr_at = [&](double t) {
    const auto below =
        std::lower_bound(targets.begin(), targets.end(), t) -
        targets.begin();
    return static_cast<double>(below) / targets.size();
  };
  double prev_t = lo, prev_diff = far_at(lo) - frr_at(lo);
  const auto steps = static_cast<long>((hi - lo) / step) + 2;
  for (long k = 1; k <= steps; ++k) {
    const double t = lo + k * step;
    const double diff = far_at(t) - frr_at(t);
    if (diff <= 0.0) {
      BruteEer out;
      if (diff == 0.0) {
        out.eer_percent = 100.0 * far_at(t);
        out.threshold = t;
        return out;
      }
      const double alpha = prev_diff / (prev_diff - diff);
      out.eer_percent =
          100.0 * (far_at(prev_t) + alpha * (far_at(t) - far_at(prev_t)));
      out.threshold = prev_t + alpha * (t - prev_t);
      return out;
    }
    prev_t = t;
    prev_diff = diff;
  }
  throw std::runtime_error("oracle: EER crossing not found");
}

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

inline double diag_log_density(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& mean,
                               const Eigen::VectorXd& var) {
  double acc = 0.0;
  for (int d = 0; d < x.size(); ++d) {
    const double r = x[d] - mean[d];
    acc += 1.8378770664093453 + std::log(var[d]) + r * r / var[d];
  }
  return -0.5 * acc;
}

// Monte-Carlo estimate of the joint density of (x_t, x_s) under a chosen
// latent-sharing pattern, integrating the generative model over its
// latents by plain sampling.
inline McEstimate mc_pair_density(const dojoba::DojobaParams& params,
                                  const Eigen::VectorXd& x_t,
                                  const Eigen::VectorXd& x_s, bool share_u,
                                  bool share_v, std::size_t draws,
                                  uint64_t seed) {
  const int dim = params.dim();
  const Eigen::VectorXd su = params.sigma_u.diag_values().cwiseSqrt();
  const Eigen::VectorXd sv = params.sigma_v.diag_values().cwiseSqrt();
  const Eigen::VectorXd se = params.sigma_eps.diag_values();
  dojoba::Prng rng = dojoba::Prng::substream(seed, 0x4d43, 0);
  double sum = 0.0, sum_sq = 0.0;
  Eigen::VectorXd u1(dim), u2(dim), v1(dim), v2(dim);
  for (std::size_t k = 0; k < draws; ++k) {
    for (int d = 0; d < dim; ++d) u1[d] = su[d] * rng.next_gauss();
    for (int d = 0; d < dim; ++d) {
      u2[d] = share_u ? u1[d] : su[d] * rng.next_gauss();
    }
    for (int d = 0; d < dim; ++d) v1[d] = sv[d] * rng.next_gauss();
    for (int d = 0; d < dim; ++d) {
      v2[d] = share_v ? v1[d] : sv[d] * rng.next_gauss();
    }
    const double p =
        std::exp(diag_log_density(x_t, params.mu + u1 + v1, se) +
                 diag_log_density(x_s, params.mu + u2 + v2, se));
    sum += p;
    sum_sq += p * p;
  }
  McEstimate est;
  est.mean = sum / draws;
  const double var = std::max(sum_sq / draws - est.mean * est.mean, 0.0);
  est.se = std::sqrt(var / draws);
  return est;
}

// Monte-Carlo estimate of p(X) for a small diagonal-model dataset: draws
// all speaker and phrase latents jointly and averages the conditional
// likelihood of every sample.
inline McEstimate mc_marginal_likelihood(const dojoba::Dataset& data,
                                         const dojoba::DojobaParams& params,
                                         std::size_t draws, uint64_t seed) {
  const int dim = data.dim();
  const Eigen::VectorXd su = params.sigma_u.diag_values().cwiseSqrt();
  const Eigen::VectorXd sv = params.sigma_v.diag_values().cwiseSqrt();
  const Eigen::VectorXd se = params.sigma_eps.diag_values();
  dojoba::Prng rng = dojoba::Prng::substream(seed, 0x4d4d, 0);
  std::vector<Eigen::VectorXd> u(data.num_speakers()),
      v(data.num_phrases());
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    for (auto& ui : u) {
      ui.resize(dim);
      for (int d = 0; d < dim; ++d) ui[d] = su[d] * rng.next_gauss();
    }
    for (auto& vj : v) {
      vj.resize(dim);
      for (int d = 0; d < dim; ++d) vj[d] = sv[d] * rng.next_gauss();
    }
    double log_p = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      log_p += diag_log_density(
          data.vec(n).features,
          params.mu + u[data.speaker_of(n)] + v[data.phrase_of(n)], se);
    }
    const double p = std::exp(log_p);
    sum += p;
    sum_sq += p * p;
  }
  McEstimate est;
  est.mean = sum / draws;
  const double var = std::max(sum_sq / draws - est.mean * est.mean, 0.0);
  est.se = std::sqrt(var / draws);
  return est;
}

inline double median_abs(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace oracle

#endif  // DOJOBA_TESTS_ORACLE_UTILS_HPP
