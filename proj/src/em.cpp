// dojoba/em.cpp

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

#include "dojoba/em.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "dojoba/gaussian.hpp"

namespace dojoba {

namespace {

constexpr int kExactLoglikGuard = 2000;
constexpr double kRelativeFloor = 1e-8;

void require_pd(const DojobaParams& params) {
  params.validate();
  if (params.sigma_u.min_variance() <= 0.0) {
    throw NumericalError("e_step: sigma_u is not positive definite");
  }
  if (params.sigma_v.min_variance() <= 0.0) {
    throw NumericalError("e_step: sigma_v is not positive definite");
  }
}

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string("e_step: ") + what +
                         " is not positive definite");
  }
  return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

// Sum of (x_n - mu - other[class_of_other(n)]) over one entity's samples.
Eigen::VectorXd centered_sum(const Dataset& data,
                             const std::vector<std::size_t>& items,
                             const Eigen::VectorXd& mu,
                             const std::vector<Eigen::VectorXd>& other,
                             const std::vector<int>& other_of) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(mu.size());
  for (std::size_t n : items) {
    s += data.vec(n).features - mu;
    if (!other.empty()) s -= other[other_of[n]];
  }
  return s;
}

double floor_of(double estimated_trace, int dim, const FitConfig& cfg) {
  return std::max(cfg.variance_floor,
                  kRelativeFloor * estimated_trace / std::max(dim, 1));
}

}  // namespace

double effective_floor(const Covariance& estimated, const FitConfig& cfg) {
  return floor_of(estimated.trace(), estimated.dim(), cfg);
}

int exact_loglik_sample_guard() { return kExactLoglikGuard; }

DojobaParams init_params(const Dataset& data, const FitConfig& cfg) {
  if (cfg.iterations < 1) {
    throw FormatError("fit: iterations must be at least 1");
  }
  if (data.num_speakers() < 2) {
    throw NumericalError(
        "insufficient-classes: need at least 2 speakers, dataset has " +
        std::to_string(data.num_speakers()));
  }
  if (!cfg.pin_sigma_v && data.num_phrases() < 2) {
    throw NumericalError(
        "insufficient-classes: need at least 2 phrases, dataset has " +
        std::to_string(data.num_phrases()));
  }
  bool has_repeat = false;
  for (const auto& [key, members] : data.pairs()) {
    if (members.size() >= 2) {
      has_repeat = true;
      break;
    }
  }
  if (!has_repeat) {
    throw NumericalError(
        "insufficient-classes: no (speaker, phrase) pair has 2 or more "
        "sessions");
  }

  const int dim = data.dim();
  const int num_speakers = data.num_speakers();
  const int num_phrases = data.num_phrases();
  const Eigen::VectorXd mu = data.mean();

  std::vector<Eigen::VectorXd> speaker_mean(num_speakers),
      phrase_mean(num_phrases);
  for (int i = 0; i < num_speakers; ++i) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
    for (std::size_t n : data.speaker_items(i)) m += data.vec(n).features;
    speaker_mean[i] = m / static_cast<double>(data.speaker_items(i).size());
  }
  for (int j = 0; j < num_phrases; ++j) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
    for (std::size_t n : data.phrase_items(j)) m += data.vec(n).features;
    phrase_mean[j] = m / static_cast<double>(data.phrase_items(j).size());
  }

  const bool diag = cfg.cov_kind == CovKind::kDiag;
  auto scatter = [&](auto&& deviations, int count) -> Covariance {
    if (diag) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
      deviations([&](const Eigen::VectorXd& d) {
        acc += d.cwiseProduct(d);
      });
      return Covariance::diag(acc / std::max(count, 1));
    }
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
    deviations([&](const Eigen::VectorXd& d) { acc += d * d.transpose(); });
    return Covariance::full(acc / std::max(count, 1));
  };

  DojobaParams p;
  p.mu = mu;
  p.sigma_u = scatter(
      [&](auto&& take) {
        for (int i = 0; i < num_speakers; ++i) take(speaker_mean[i] - mu);
      },
      num_speakers);
  if (cfg.pin_sigma_v) {
    p.sigma_v = Covariance::zeros(dim, cfg.cov_kind);
  } else {
    p.sigma_v = scatter(
        [&](auto&& take) {
          for (int j = 0; j < num_phrases; ++j) take(phrase_mean[j] - mu);
        },
        num_phrases);
  }
  p.sigma_eps = scatter(
      [&](auto&& take) {
        for (std::size_t n = 0; n < data.size(); ++n) {
          take(data.vec(n).features - speaker_mean[data.speaker_of(n)] -
               phrase_mean[data.phrase_of(n)] + mu);
        }
      },
      static_cast<int>(data.size()));

  p.sigma_u = p.sigma_u.floored(effective_floor(p.sigma_u, cfg));
  p.sigma_v = cfg.pin_sigma_v
                  ? p.sigma_v.floored(cfg.variance_floor)
                  : p.sigma_v.floored(effective_floor(p.sigma_v, cfg));
  p.sigma_eps = p.sigma_eps.floored(effective_floor(p.sigma_eps, cfg));
  return p;
}

PairPosterior pair_posterior(const Dataset& data, const DojobaParams& params,
                             int speaker, int phrase) {
  const int dim = data.dim();
  const auto it = data.pairs().find({speaker, phrase});
  if (it == data.pairs().end()) {
    throw FormatError("pair_posterior: pair (" + std::to_string(speaker) +
                      ", " + std::to_string(phrase) + ") has no sessions");
  }
  const double h = static_cast<double>(it->second.size());
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dim);
  for (std::size_t n : it->second) s += data.vec(n).features - params.mu;

  PairPosterior post;
  if (params.sigma_u.is_diag() && params.sigma_v.is_diag() &&
      params.sigma_eps.is_diag()) {
    const Eigen::VectorXd& su = params.sigma_u.diag_values();
    const Eigen::VectorXd& sv = params.sigma_v.diag_values();
    const Eigen::VectorXd& se = params.sigma_eps.diag_values();
    post.mean_u.resize(dim);
    post.mean_v.resize(dim);
    post.cov_uu.resize(dim);
    post.cov_vv.resize(dim);
    post.cov_uv.resize(dim);
    for (int d = 0; d < dim; ++d) {
      const double pu = 1.0 / su[d] + h / se[d];
      const double pv = 1.0 / sv[d] + h / se[d];
      const double po = h / se[d];
      const double det = pu * pv - po * po;
      if (!(det > 0.0) || !std::isfinite(det)) {
        throw NumericalError(
            "e_step: singular pair precision for speaker '" +
            data.speaker_id(speaker) + "' phrase '" + data.phrase_id(phrase) +
            "' at dimension " + std::to_string(d));
      }
      post.cov_uu[d] = pv / det;
      post.cov_vv[d] = pu / det;
      post.cov_uv[d] = -po / det;
      const double rhs = s[d] / se[d];
      post.mean_u[d] = (post.cov_uu[d] + post.cov_uv[d]) * rhs;
      post.mean_v[d] = (post.cov_uv[d] + post.cov_vv[d]) * rhs;
    }
    return post;
  }

  const Eigen::MatrixXd su_inv =
      inverse_spd(params.sigma_u.dense(), "sigma_u");
  const Eigen::MatrixXd sv_inv =
      inverse_spd(params.sigma_v.dense(), "sigma_v");
  const Eigen::MatrixXd se_inv =
      inverse_spd(params.sigma_eps.dense(), "sigma_eps");
  Eigen::MatrixXd prec(2 * dim, 2 * dim);
  prec.topLeftCorner(dim, dim) = su_inv + h * se_inv;
  prec.bottomRightCorner(dim, dim) = sv_inv + h * se_inv;
  prec.topRightCorner(dim, dim) = h * se_inv;
  prec.bottomLeftCorner(dim, dim) = h * se_inv;
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("e_step: singular pair precision for speaker '" +
                         data.speaker_id(speaker) + "' phrase '" +
                         data.phrase_id(phrase) + "'");
  }
  Eigen::VectorXd rhs(2 * dim);
  rhs.head(dim) = se_inv * s;
  rhs.tail(dim) = se_inv * s;
  const Eigen::VectorXd mean = llt.solve(rhs);
  post.cov_full = llt.solve(Eigen::MatrixXd::Identity(2 * dim, 2 * dim));
  post.mean_u = mean.head(dim);
  post.mean_v = mean.tail(dim);
  return post;
}

EStats e_step(const Dataset& data, const DojobaParams& params,
              const EStats& prev) {
  require_pd(params);
  const int dim = data.dim();
  const int num_speakers = data.num_speakers();
  const int num_phrases = data.num_phrases();
  const bool diag = params.sigma_u.is_diag() && params.sigma_v.is_diag() &&
                    params.sigma_eps.is_diag();

  if (!prev.empty()) {
    if (static_cast<int>(prev.eu.size()) != num_speakers ||
        static_cast<int>(prev.ev.size()) != num_phrases) {
      throw FormatError("e_step: previous stats do not match dataset");
    }
  }

  EStats stats;
  stats.kind = diag ? CovKind::kDiag : CovKind::kFull;
  stats.dim = dim;
  stats.speaker_counts.resize(num_speakers);
  stats.phrase_counts.resize(num_phrases);
  for (int i = 0; i < num_speakers; ++i) {
    stats.speaker_counts[i] = static_cast<int>(data.speaker_items(i).size());
  }
  for (int j = 0; j < num_phrases; ++j) {
    stats.phrase_counts[j] = static_cast<int>(data.phrase_items(j).size());
  }

  std::vector<int> speaker_of(data.size()), phrase_of(data.size());
  for (std::size_t n = 0; n < data.size(); ++n) {
    speaker_of[n] = data.speaker_of(n);
    phrase_of[n] = data.phrase_of(n);
  }

  stats.eu.resize(num_speakers);
  stats.ev.resize(num_phrases);

  if (diag) {
    const Eigen::VectorXd& su = params.sigma_u.diag_values();
    const Eigen::VectorXd& sv = params.sigma_v.diag_values();
    const Eigen::VectorXd& se = params.sigma_eps.diag_values();
    stats.euu_diag.resize(num_speakers);
    stats.evv_diag.resize(num_phrases);

    for (int i = 0; i < num_speakers; ++i) {
      const double n_i = stats.speaker_counts[i];
      const Eigen::VectorXd s =
          centered_sum(data, data.speaker_items(i), params.mu, prev.ev,
                       phrase_of);
      stats.eu[i].resize(dim);
      stats.euu_diag[i].resize(dim);
      for (int d = 0; d < dim; ++d) {
        const double prec = 1.0 / su[d] + n_i / se[d];
        stats.eu[i][d] = s[d] / (se[d] * prec);
        stats.euu_diag[i][d] =
            1.0 / prec + stats.eu[i][d] * stats.eu[i][d];
      }
    }
    for (int j = 0; j < num_phrases; ++j) {
      const double m_j = stats.phrase_counts[j];
      const Eigen::VectorXd s =
          centered_sum(data, data.phrase_items(j), params.mu, prev.eu,
                       speaker_of);
      stats.ev[j].resize(dim);
      stats.evv_diag[j].resize(dim);
      for (int d = 0; d < dim; ++d) {
        const double prec = 1.0 / sv[d] + m_j / se[d];
        stats.ev[j][d] = s[d] / (se[d] * prec);
        stats.evv_diag[j][d] =
            1.0 / prec + stats.ev[j][d] * stats.ev[j][d];
      }
    }
    for (const auto& [key, members] : data.pairs()) {
      const PairPosterior post =
          pair_posterior(data, params, key.first, key.second);
      stats.euv_diag[key] =
          post.cov_uv + post.mean_u.cwiseProduct(post.mean_v);
    }
    return stats;
  }

  const Eigen::MatrixXd su_inv =
      inverse_spd(params.sigma_u.dense(), "sigma_u");
  const Eigen::MatrixXd sv_inv =
      inverse_spd(params.sigma_v.dense(), "sigma_v");
  const Eigen::MatrixXd se_inv =
      inverse_spd(params.sigma_eps.dense(), "sigma_eps");
  stats.euu_full.resize(num_speakers);
  stats.evv_full.resize(num_phrases);

  for (int i = 0; i < num_speakers; ++i) {
    const double n_i = stats.speaker_counts[i];
    const Eigen::VectorXd s = centered_sum(
        data, data.speaker_items(i), params.mu, prev.ev, phrase_of);
    Eigen::LLT<Eigen::MatrixXd> llt(
        Eigen::MatrixXd(su_inv + n_i * se_inv));
    if (llt.info() != Eigen::Success) {
      throw NumericalError("e_step: singular precision for speaker '" +
                           data.speaker_id(i) + "'");
    }
    stats.eu[i] = llt.solve(se_inv * s);
    stats.euu_full[i] =
        llt.solve(Eigen::MatrixXd::Identity(dim, dim)) +
        stats.eu[i] * stats.eu[i].transpose();
  }
  for (int j = 0; j < num_phrases; ++j) {
    const double m_j = stats.phrase_counts[j];
    const Eigen::VectorXd s = centered_sum(
        data, data.phrase_items(j), params.mu, prev.eu, speaker_of);
    Eigen::LLT<Eigen::MatrixXd> llt(
        Eigen::MatrixXd(sv_inv + m_j * se_inv));
    if (llt.info() != Eigen::Success) {
      throw NumericalError("e_step: singular precision for phrase '" +
                           data.phrase_id(j) + "'");
    }
    stats.ev[j] = llt.solve(se_inv * s);
    stats.evv_full[j] =
        llt.solve(Eigen::MatrixXd::Identity(dim, dim)) +
        stats.ev[j] * stats.ev[j].transpose();
  }
  for (const auto& [key, members] : data.pairs()) {
    const PairPosterior post =
        pair_posterior(data, params, key.first, key.second);
    stats.euv_full[key] = post.cov_full.topRightCorner(dim, dim) +
                          post.mean_u * post.mean_v.transpose();
  }
  return stats;
}

DojobaParams m_step(const Dataset& data, const EStats& stats,
                    const DojobaParams& params_old, const FitConfig& cfg) {
  if (stats.empty()) {
    throw FormatError("m_step: empty stats");
  }
  if (static_cast<int>(stats.eu.size()) != data.num_speakers() ||
      static_cast<int>(stats.ev.size()) != data.num_phrases() ||
      stats.dim != data.dim()) {
    throw FormatError("m_step: stats do not match dataset");
  }
  const int dim = data.dim();
  const double total = static_cast<double>(data.size());
  const bool diag = stats.kind == CovKind::kDiag;
  const bool per_class = cfg.normalization == MStepNormalization::kPerClass;

  DojobaParams next;
  next.mu = data.mean();

  if (diag) {
    Eigen::VectorXd acc_u = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd acc_v = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd acc_e = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < data.num_speakers(); ++i) {
      acc_u += (per_class ? 1.0 : double(stats.speaker_counts[i])) *
               stats.euu_diag[i];
    }
    for (int j = 0; j < data.num_phrases(); ++j) {
      acc_v += (per_class ? 1.0 : double(stats.phrase_counts[j])) *
               stats.evv_diag[j];
    }
    for (const auto& [key, members] : data.pairs()) {
      const auto& [i, j] = key;
      const double h = static_cast<double>(members.size());
      const Eigen::VectorXd& euv = stats.euv_diag.at(key);
      for (std::size_t n : members) {
        const Eigen::VectorXd r = data.vec(n).features - next.mu;
        acc_e += r.cwiseProduct(r) -
                 2.0 * r.cwiseProduct(stats.eu[i] + stats.ev[j]);
      }
      acc_e += h * (stats.euu_diag[i] + 2.0 * euv + stats.evv_diag[j]);
    }
    next.sigma_u = Covariance::diag(
        acc_u / (per_class ? double(data.num_speakers()) : total));
    next.sigma_v = Covariance::diag(
        acc_v / (per_class ? double(data.num_phrases()) : total));
    next.sigma_eps = Covariance::diag(acc_e / total);
  } else {
    Eigen::MatrixXd acc_u = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd acc_v = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd acc_e = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < data.num_speakers(); ++i) {
      acc_u += (per_class ? 1.0 : double(stats.speaker_counts[i])) *
               stats.euu_full[i];
    }
    for (int j = 0; j < data.num_phrases(); ++j) {
      acc_v += (per_class ? 1.0 : double(stats.phrase_counts[j])) *
               stats.evv_full[j];
    }
    for (const auto& [key, members] : data.pairs()) {
      const auto& [i, j] = key;
      const double h = static_cast<double>(members.size());
      const Eigen::MatrixXd& euv = stats.euv_full.at(key);
      for (std::size_t n : members) {
        const Eigen::VectorXd r = data.vec(n).features - next.mu;
        acc_e += r * r.transpose() -
                 2.0 * r * (stats.eu[i] + stats.ev[j]).transpose();
      }
      acc_e += h * (stats.euu_full[i] + euv + euv.transpose() +
                    stats.evv_full[j]);
    }
    // The cross term is accumulated sample-wise and is only symmetric in
    // expectation; symmetrize before constructing the covariance.
    acc_e = 0.5 * (acc_e + acc_e.transpose()).eval();
    next.sigma_u = Covariance::full(
        acc_u / (per_class ? double(data.num_speakers()) : total));
    next.sigma_v = Covariance::full(
        acc_v / (per_class ? double(data.num_phrases()) : total));
    next.sigma_eps = Covariance::full(acc_e / total);
  }

  next.sigma_u = next.sigma_u.floored(effective_floor(next.sigma_u, cfg));
  if (cfg.pin_sigma_v) {
    next.sigma_v = Covariance::zeros(dim, params_old.sigma_v.kind())
                       .floored(cfg.variance_floor);
  } else {
    next.sigma_v = next.sigma_v.floored(effective_floor(next.sigma_v, cfg));
  }
  next.sigma_eps =
      next.sigma_eps.floored(effective_floor(next.sigma_eps, cfg));
  return next;
}

namespace {

double param_delta(const DojobaParams& a, const DojobaParams& b) {
  auto cov_delta = [](const Covariance& x, const Covariance& y) {
    if (x.is_diag() && y.is_diag()) {
      return (x.diag_values() - y.diag_values()).cwiseAbs().maxCoeff();
    }
    return (x.dense() - y.dense()).cwiseAbs().maxCoeff();
  };
  double delta = (a.mu - b.mu).cwiseAbs().maxCoeff();
  delta = std::max(delta, cov_delta(a.sigma_u, b.sigma_u));
  delta = std::max(delta, cov_delta(a.sigma_v, b.sigma_v));
  delta = std::max(delta, cov_delta(a.sigma_eps, b.sigma_eps));
  return delta;
}

}  // namespace

std::pair<DojobaParams, FitDiagnostics> fit(const Dataset& data,
                                            const FitConfig& cfg) {
  DojobaParams params = init_params(data, cfg);
  FitDiagnostics diags;
  diags.loglik_is_exact =
      cfg.record_exact_loglik && cfg.cov_kind == CovKind::kDiag &&
      static_cast<int>(data.size()) <= kExactLoglikGuard;

  EStats prev;
  for (int it = 0; it < cfg.iterations; ++it) {
    EStats stats = e_step(data, params, prev);
    DojobaParams next = m_step(data, stats, params, cfg);
    const double delta = param_delta(next, params);
    params = std::move(next);
    diags.loglik.push_back(diags.loglik_is_exact
                               ? exact_marginal_loglik(data, params)
                               : pair_surrogate_loglik(data, params));
    diags.param_delta.push_back(delta);
    diags.iterations_run = it + 1;
    if (cfg.early_stop_delta > 0.0 && delta < cfg.early_stop_delta) break;
    prev = std::move(stats);
  }
  return {std::move(params), std::move(diags)};
}

double exact_marginal_loglik(const Dataset& data,
                             const DojobaParams& params) {
  if (!params.sigma_u.is_diag() || !params.sigma_v.is_diag() ||
      !params.sigma_eps.is_diag()) {
    throw NumericalError(
        "exact_marginal_loglik: full covariances unsupported");
  }
  const int total = static_cast<int>(data.size());
  if (total > kExactLoglikGuard) {
    throw NumericalError("exact_marginal_loglik: dataset has " +
                         std::to_string(total) + " samples, guard is " +
                         std::to_string(kExactLoglikGuard));
  }
  if (total == 0) throw FormatError("exact_marginal_loglik: empty dataset");

  const int dim = data.dim();
  const Eigen::VectorXd& su = params.sigma_u.diag_values();
  const Eigen::VectorXd& sv = params.sigma_v.diag_values();
  const Eigen::VectorXd& se = params.sigma_eps.diag_values();

  double loglik = 0.0;
  Eigen::MatrixXd cov(total, total);
  Eigen::VectorXd x(total), mean(total);
  for (int d = 0; d < dim; ++d) {
    for (int a = 0; a < total; ++a) {
      for (int b = 0; b < total; ++b) {
        double c = 0.0;
        if (data.speaker_of(a) == data.speaker_of(b)) c += su[d];
        if (data.phrase_of(a) == data.phrase_of(b)) c += sv[d];
        if (a == b) c += se[d];
        cov(a, b) = c;
      }
      x[a] = data.vec(a).features[d];
      mean[a] = params.mu[d];
    }
    loglik += log_gaussian_dense(x, mean, cov);
  }
  return loglik;
}

double pair_surrogate_loglik(const Dataset& data,
                             const DojobaParams& params) {
  const int dim = data.dim();
  const Eigen::MatrixXd shared =
      (params.sigma_u + params.sigma_v).dense();
  const Eigen::MatrixXd eps = params.sigma_eps.dense();
  const Eigen::LLT<Eigen::MatrixXd> eps_llt(eps);
  if (eps_llt.info() != Eigen::Success) {
    throw NumericalError("surrogate_loglik: sigma_eps not positive definite");
  }
  double eps_logdet = 0.0;
  for (int d = 0; d < dim; ++d) {
    eps_logdet += 2.0 * std::log(Eigen::MatrixXd(eps_llt.matrixL())(d, d));
  }

  double loglik = 0.0;
  std::map<int, std::pair<double, Eigen::MatrixXd>> by_count;
  for (const auto& [key, members] : data.pairs()) {
    const int h = static_cast<int>(members.size());
    auto it = by_count.find(h);
    if (it == by_count.end()) {
      const Eigen::MatrixXd mixed = eps + h * shared;
      Eigen::LLT<Eigen::MatrixXd> mixed_llt(mixed);
      if (mixed_llt.info() != Eigen::Success) {
        throw NumericalError("surrogate_loglik: mixed covariance not "
                             "positive definite");
      }
      double logdet = 0.0;
      for (int d = 0; d < dim; ++d) {
        logdet +=
            2.0 * std::log(Eigen::MatrixXd(mixed_llt.matrixL())(d, d));
      }
      // (eps + h*shared)^{-1} shared eps^{-1}: the coupling correction.
      const Eigen::MatrixXd correction = mixed_llt.solve(
          Eigen::MatrixXd(shared * eps_llt.solve(
                              Eigen::MatrixXd::Identity(dim, dim))));
      it = by_count.emplace(h, std::make_pair(logdet, correction)).first;
    }
    const auto& [mixed_logdet, correction] = it->second;

    Eigen::VectorXd s = Eigen::VectorXd::Zero(dim);
    double quad = 0.0;
    for (std::size_t n : members) {
      const Eigen::VectorXd r = data.vec(n).features - params.mu;
      quad += r.dot(eps_llt.solve(r));
      s += r;
    }
    quad -= s.dot(correction * s);
    loglik += -0.5 * (h * dim * kLog2Pi + (h - 1) * eps_logdet +
                      mixed_logdet + quad);
  }
  return loglik;
}

}  // namespace dojoba
