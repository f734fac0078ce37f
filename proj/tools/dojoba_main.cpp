// tools/dojoba_main.cpp

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

#include <CLI11.hpp>
#include <cstdio>
#include <map>
#include <optional>
#include <string>

#include "dojoba/em.hpp"
#include "dojoba/eval.hpp"
#include "dojoba/io.hpp"
#include "dojoba/jb.hpp"
#include "dojoba/scoring.hpp"
#include "dojoba/synth.hpp"
#include "dojoba/whiten.hpp"

namespace {

using namespace dojoba;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct SynthArgs {
  int speakers = 50;
  int phrases = 10;
  int sessions = 10;
  int dim = 8;
  uint64_t seed = 0;
  double mu_scale = 1.0;
  double sigma_u_scale = 1.0;
  double sigma_v_scale = 1.0;
  double sigma_eps_scale = 1.0;
  std::string out;
  std::string latents_out;
};

std::string params_digest(const DojobaParams& p) {
  std::string bytes;
  auto push = [&bytes](const Eigen::VectorXd& v) {
    bytes.append(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::size_t>(v.size()) * sizeof(double));
  };
  push(p.mu);
  push(p.sigma_u.diagonal());
  push(p.sigma_v.diagonal());
  push(p.sigma_eps.diagonal());
  return fnv1a_hex(bytes);
}

int run_synth(const SynthArgs& args) {
  SynthSpec spec;
  spec.speakers = args.speakers;
  spec.phrases = args.phrases;
  spec.sessions = args.sessions;
  spec.dim = args.dim;
  spec.seed = args.seed;
  spec.params =
      random_diag_params(args.dim, args.seed, args.mu_scale,
                         args.sigma_u_scale, args.sigma_v_scale,
                         args.sigma_eps_scale);
  const SynthResult result = sample_dataset(spec);
  write_file(args.out, vectors_to_csv(result.data.vectors()));

  if (!args.latents_out.empty()) {
    std::string csv = "kind,id";
    for (int d = 0; d < args.dim; ++d) csv += ",f" + std::to_string(d);
    csv += "\n";
    for (int i = 0; i < spec.speakers; ++i) {
      csv += "speaker," + result.data.speaker_id(i);
      for (int d = 0; d < args.dim; ++d) {
        csv += "," + format_double(result.speaker_latents[i][d]);
      }
      csv += "\n";
    }
    for (int j = 0; j < spec.phrases; ++j) {
      csv += "phrase," + result.data.phrase_id(j);
      for (int d = 0; d < args.dim; ++d) {
        csv += "," + format_double(result.phrase_latents[j][d]);
      }
      csv += "\n";
    }
    write_file(args.latents_out, csv);
  }

  std::printf("wrote %zu vectors (dim %d) to %s\n", result.data.size(),
              args.dim, args.out.c_str());
  std::printf("ground-truth digest %s\n",
              params_digest(spec.params).c_str());
  return 0;
}

struct TrainArgs {
  std::string vectors;
  std::string kind = "dojoba";
  int iterations = 10;
  std::string cov = "diag";
  int pca = 0;
  std::string norm = "paper";
  double floor = 1e-10;
  uint64_t seed = 0;
  std::string class_mode = "combined";
  std::string out;
};

int run_train(const TrainArgs& args) {
  const std::string raw = read_file(args.vectors);
  std::vector<LabeledVector> vectors = vectors_from_csv(raw);

  std::optional<Projection> projection;
  if (args.pca > 0) {
    std::vector<Eigen::VectorXd> features;
    features.reserve(vectors.size());
    for (const auto& v : vectors) features.push_back(v.features);
    projection = whiten_fit(features, args.pca);
    for (auto& v : vectors) {
      v.features = whiten_apply(*projection, v.features);
    }
  }
  const Dataset data = dataset_from_vectors(vectors);

  FitConfig cfg;
  cfg.iterations = args.iterations;
  cfg.cov_kind = args.cov == "full" ? CovKind::kFull : CovKind::kDiag;
  cfg.variance_floor = args.floor;
  cfg.seed = args.seed;
  cfg.normalization = args.norm == "per-class"
                          ? MStepNormalization::kPerClass
                          : MStepNormalization::kTotalSamples;

  ModelFile model;
  model.cov_kind = cfg.cov_kind;
  model.iterations = args.iterations;
  model.seed = args.seed;
  model.dataset_digest = fnv1a_hex(raw);
  model.normalization = args.norm;
  model.projection = projection;

  FitDiagnostics diags;
  if (args.kind == "jb") {
    const ClassMode mode = args.class_mode == "speaker"
                               ? ClassMode::kSpeakerOnly
                               : ClassMode::kSpeakerPhrase;
    auto [params, d] = fit_jb(data, cfg, mode);
    model.kind = "jb";
    model.jb = std::move(params);
    diags = std::move(d);
  } else {
    auto [params, d] = fit(data, cfg);
    model.kind = "dojoba";
    model.dojoba = std::move(params);
    diags = std::move(d);
  }

  for (int k = 0; k < diags.iterations_run; ++k) {
    std::fprintf(stderr, "iter %d loglik %.6f (%s) delta %.3e\n", k + 1,
                 diags.loglik[k],
                 diags.loglik_is_exact ? "exact" : "surrogate",
                 diags.param_delta[k]);
  }

  write_file(args.out, model_to_json(model));
  std::printf("wrote %s model (dim %d) to %s\n", model.kind.c_str(),
              args.kind == "jb" ? model.jb.dim() : model.dojoba.dim(),
              args.out.c_str());
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string enroll;
  std::string test;
  std::string scorer = "model";
  std::string priors = "1/3";
  std::string trials;
  std::string report_csv;
  std::string det_csv;
};

HypothesisPriors parse_priors(const std::string& text) {
  if (text == "1/3") return HypothesisPriors::uniform();
  HypothesisPriors p{0.0, 0.0, 0.0};
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &p.p1, &p.p2, &p.p3) != 3) {
    throw CLI::ValidationError("--priors", "expected three comma-separated "
                                           "probabilities");
  }
  try {
    p.validate();
  } catch (const FormatError& e) {
    throw CLI::ValidationError("--priors", e.what());
  }
  return p;
}

TrialCondition parse_condition(const std::string& name,
                               const std::string& context) {
  if (name == "TC") return TrialCondition::kTC;
  if (name == "TW") return TrialCondition::kTW;
  if (name == "IC") return TrialCondition::kIC;
  if (name == "IW") return TrialCondition::kIW;
  throw FormatError("trial list: unknown condition '" + name + "' " +
                    context);
}

std::vector<Trial> resolve_trials(const std::vector<TrialSpec>& specs,
                                  const std::vector<Enrollment>& enrollments,
                                  const std::vector<LabeledVector>& tests) {
  std::map<std::pair<std::string, std::string>, int> enroll_index;
  for (int e = 0; e < static_cast<int>(enrollments.size()); ++e) {
    enroll_index[{enrollments[e].speaker_id, enrollments[e].phrase_id}] = e;
  }
  std::map<std::string, std::vector<int>> by_session;
  for (int t = 0; t < static_cast<int>(tests.size()); ++t) {
    by_session[tests[t].session_id].push_back(t);
  }

  std::vector<Trial> trials;
  trials.reserve(specs.size());
  for (const auto& spec : specs) {
    const auto eit =
        enroll_index.find({spec.enroll_speaker, spec.enroll_phrase});
    if (eit == enroll_index.end()) {
      throw FormatError("trial list: no enrollment for speaker '" +
                        spec.enroll_speaker + "' phrase '" +
                        spec.enroll_phrase + "'");
    }
    const auto tit = by_session.find(spec.test_session);
    if (tit == by_session.end()) {
      throw FormatError("trial list: no test session '" +
                        spec.test_session + "'");
    }
    if (tit->second.size() > 1) {
      throw FormatError("trial list: test session '" + spec.test_session +
                        "' is ambiguous; explicit trials need unique "
                        "session ids");
    }
    const int t = tit->second.front();
    const Enrollment& enr = enrollments[eit->second];
    const bool same_speaker = tests[t].speaker_id == enr.speaker_id;
    const bool same_phrase = tests[t].phrase_id == enr.phrase_id;
    if (same_speaker && same_phrase &&
        enr.sessions.count(tests[t].session_id) != 0) {
      throw FormatError("trial list: session '" + tests[t].session_id +
                        "' is used for both enrollment and test");
    }
    Trial trial;
    trial.enroll = eit->second;
    trial.test = t;
    trial.condition =
        same_speaker
            ? (same_phrase ? TrialCondition::kTC : TrialCondition::kTW)
            : (same_phrase ? TrialCondition::kIC : TrialCondition::kIW);
    const TrialCondition expected = parse_condition(
        spec.expected_condition,
        "for test session '" + spec.test_session + "'");
    if (expected != trial.condition) {
      throw FormatError(
          std::string("trial list: condition mismatch for test session '") +
          spec.test_session + "': expected " + spec.expected_condition +
          ", labels give " + condition_name(trial.condition));
    }
    trials.push_back(trial);
  }
  return trials;
}

int run_eval(const EvalArgs& args) {
  const HypothesisPriors priors = parse_priors(args.priors);

  std::optional<ModelFile> model;
  if (!args.model.empty()) {
    model = model_from_json(read_file(args.model));
  }
  if (args.scorer == "model" && !model.has_value()) {
    throw CLI::ValidationError("--model", "required unless --scorer cosine");
  }

  std::vector<LabeledVector> enroll_vecs =
      vectors_from_csv(read_file(args.enroll));
  std::vector<LabeledVector> test_vecs =
      vectors_from_csv(read_file(args.test));

  if (model.has_value() && model->projection.has_value()) {
    for (auto& v : enroll_vecs) {
      v.features = whiten_apply(*model->projection, v.features);
    }
    for (auto& v : test_vecs) {
      v.features = whiten_apply(*model->projection, v.features);
    }
  }

  std::string system = "cosine";
  Scorer scorer = make_cosine_scorer();
  if (args.scorer == "model") {
    const int dim = model->kind == "dojoba" ? model->dojoba.dim()
                                            : model->jb.dim();
    for (const auto& v : enroll_vecs) {
      if (v.features.size() != dim) {
        throw FormatError("eval: enrollment dimension " +
                          std::to_string(v.features.size()) +
                          " does not match model dimension " +
                          std::to_string(dim));
      }
    }
    for (const auto& v : test_vecs) {
      if (v.features.size() != dim) {
        throw FormatError("eval: test dimension " +
                          std::to_string(v.features.size()) +
                          " does not match model dimension " +
                          std::to_string(dim));
      }
    }
    if (model->kind == "dojoba") {
      system = "dojoba";
      scorer = make_dojoba_scorer(model->dojoba, priors);
    } else {
      system = "jb";
      scorer = make_jb_scorer(model->jb);
    }
  }

  const std::vector<Enrollment> enrollments =
      build_enrollments(enroll_vecs);

  ScoreReport report;
  if (!args.trials.empty()) {
    const std::vector<TrialSpec> specs =
        trials_from_tsv(read_file(args.trials));
    const std::vector<Trial> trials =
        resolve_trials(specs, enrollments, test_vecs);
    report =
        evaluate_trials(system, scorer, enrollments, test_vecs, trials);
  } else {
    report = evaluate(system, scorer, enrollments, test_vecs);
  }

  std::fputs(report_to_table(report).c_str(), stdout);
  if (!args.report_csv.empty()) {
    write_file(args.report_csv, report_to_csv(report));
  }
  if (!args.det_csv.empty()) {
    write_file(args.det_csv, det_to_csv(report));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-latent (speaker x phrase) Bayesian verification "
               "back-end: synthetic data, EM training, scoring, EER "
               "evaluation"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Sample a labeled dataset from the generative model");
  synth->add_option("--speakers", synth_args.speakers)
      ->check(CLI::PositiveNumber);
  synth->add_option("--phrases", synth_args.phrases)
      ->check(CLI::PositiveNumber);
  synth->add_option("--sessions", synth_args.sessions)
      ->check(CLI::PositiveNumber);
  synth->add_option("--dim", synth_args.dim)->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_args.seed);
  synth->add_option("--mu-scale", synth_args.mu_scale);
  synth->add_option("--sigma-u-scale", synth_args.sigma_u_scale);
  synth->add_option("--sigma-v-scale", synth_args.sigma_v_scale);
  synth->add_option("--sigma-eps-scale", synth_args.sigma_eps_scale);
  synth->add_option("--out", synth_args.out)->required();
  synth->add_option("--latents", synth_args.latents_out);

  TrainArgs train_args;
  CLI::App* train =
      app.add_subcommand("train", "Fit a model to a vector CSV");
  train->add_option("--vectors", train_args.vectors)->required();
  train->add_option("--kind", train_args.kind)
      ->check(CLI::IsMember({"dojoba", "jb"}));
  train->add_option("--iters", train_args.iterations)
      ->check(CLI::PositiveNumber);
  train->add_option("--cov", train_args.cov)
      ->check(CLI::IsMember({"diag", "full"}));
  train->add_option("--pca", train_args.pca)
      ->check(CLI::NonNegativeNumber);
  train->add_option("--norm", train_args.norm)
      ->check(CLI::IsMember({"paper", "per-class"}));
  train->add_option("--floor", train_args.floor)
      ->check(CLI::PositiveNumber);
  train->add_option("--seed", train_args.seed);
  train->add_option("--class-mode", train_args.class_mode)
      ->check(CLI::IsMember({"combined", "speaker"}));
  train->add_option("--out", train_args.out)->required();

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score enrollment/test files and report per-condition EER");
  eval->add_option("--model", eval_args.model);
  eval->add_option("--enroll", eval_args.enroll)->required();
  eval->add_option("--test", eval_args.test)->required();
  eval->add_option("--scorer", eval_args.scorer)
      ->check(CLI::IsMember({"model", "cosine"}));
  eval->add_option("--priors", eval_args.priors);
  eval->add_option("--trials", eval_args.trials);
  eval->add_option("--report-csv", eval_args.report_csv);
  eval->add_option("--det-csv", eval_args.det_csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(synth)) return run_synth(synth_args);
    if (app.got_subcommand(train)) return run_train(train_args);
    return run_eval(eval_args);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}
