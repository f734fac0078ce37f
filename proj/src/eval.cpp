// dojoba/eval.cpp

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

#include "dojoba/eval.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <thread>

namespace dojoba {

const char* condition_name(TrialCondition c) {
  switch (c) {
    case TrialCondition::kTC: return "TC";
    case TrialCondition::kTW: return "TW";
    case TrialCondition::kIC: return "IC";
    case TrialCondition::kIW: return "IW";
  }
  return "?";
}

std::vector<Trial> build_trials(const std::vector<Enrollment>& enrollments,
                                const std::vector<LabeledVector>& tests) {
  std::vector<Trial> trials;
  trials.reserve(enrollments.size() * tests.size());
  for (int e = 0; e < static_cast<int>(enrollments.size()); ++e) {
    const Enrollment& enr = enrollments[e];
    for (int t = 0; t < static_cast<int>(tests.size()); ++t) {
      const LabeledVector& test = tests[t];
      const bool same_speaker = test.speaker_id == enr.speaker_id;
      const bool same_phrase = test.phrase_id == enr.phrase_id;
      if (same_speaker && same_phrase &&
          enr.sessions.count(test.session_id) != 0) {
        throw FormatError("build_trials: session '" + test.session_id +
                          "' of speaker '" + test.speaker_id + "' phrase '" +
                          test.phrase_id +
                          "' is used for both enrollment and test");
      }
      Trial trial;
      trial.enroll = e;
      trial.test = t;
      trial.condition = same_speaker
                            ? (same_phrase ? TrialCondition::kTC
                                           : TrialCondition::kTW)
                            : (same_phrase ? TrialCondition::kIC
                                           : TrialCondition::kIW);
      trials.push_back(trial);
    }
  }
  return trials;
}

namespace {

struct Sweep {
  std::vector<double> thresholds;
  std::vector<double> far, frr;
};

// (FAR, FRR) at every distinct score and midpoint, bracketed by sentinels,
// in increasing threshold order.
Sweep sweep_rates(std::vector<double> targets,
                  std::vector<double> nontargets) {
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());

  std::vector<double> grid;
  grid.reserve(targets.size() + nontargets.size());
  grid.insert(grid.end(), targets.begin(), targets.end());
  grid.insert(grid.end(), nontargets.begin(), nontargets.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> thresholds;
  thresholds.reserve(2 * grid.size() + 2);
  thresholds.push_back(grid.front() - 1.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    thresholds.push_back(grid[k]);
    if (k + 1 < grid.size()) {
      thresholds.push_back(0.5 * (grid[k] + grid[k + 1]));
    }
  }
  thresholds.push_back(grid.back() + 1.0);

  Sweep sweep;
  sweep.thresholds = std::move(thresholds);
  sweep.far.reserve(sweep.thresholds.size());
  sweep.frr.reserve(sweep.thresholds.size());
  for (double t : sweep.thresholds) {
    const auto nt_below =
        std::lower_bound(nontargets.begin(), nontargets.end(), t) -
        nontargets.begin();
    const auto tg_below =
        std::lower_bound(targets.begin(), targets.end(), t) -
        targets.begin();
    sweep.far.push_back(
        static_cast<double>(nontargets.size() - nt_below) /
        static_cast<double>(nontargets.size()));
    sweep.frr.push_back(static_cast<double>(tg_below) /
                        static_cast<double>(targets.size()));
  }
  return sweep;
}

}  // namespace

EerResult compute_eer(const std::vector<double>& target_scores,
                      const std::vector<double>& nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty()) {
    throw FormatError("compute_eer: empty score list");
  }
  const Sweep sweep = sweep_rates(target_scores, nontarget_scores);

  // FAR - FRR decreases from +1 to -1; find the crossing.
  for (std::size_t k = 0; k < sweep.thresholds.size(); ++k) {
    const double diff = sweep.far[k] - sweep.frr[k];
    if (diff > 0.0) continue;
    EerResult result;
    if (diff == 0.0 || k == 0) {
      result.eer_percent = 100.0 * sweep.far[k];
      result.threshold = sweep.thresholds[k];
      return result;
    }
    const double prev = sweep.far[k - 1] - sweep.frr[k - 1];
    const double alpha = prev / (prev - diff);
    result.eer_percent =
        100.0 * (sweep.far[k - 1] + alpha * (sweep.far[k] - sweep.far[k - 1]));
    result.threshold =
        sweep.thresholds[k - 1] +
        alpha * (sweep.thresholds[k] - sweep.thresholds[k - 1]);
    return result;
  }
  // Unreachable: the last sweep point has FAR 0, FRR 1.
  throw NumericalError("compute_eer: no crossing found");
}

std::vector<DetPoint> det_points(
    const std::vector<double>& target_scores,
    const std::vector<double>& nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty()) {
    throw FormatError("det_points: empty score list");
  }
  const Sweep sweep = sweep_rates(target_scores, nontarget_scores);
  std::vector<DetPoint> points(sweep.thresholds.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    points[k] = {sweep.thresholds[k], sweep.far[k], sweep.frr[k]};
  }
  return points;
}

namespace {

int worker_count() {
  const char* env = std::getenv("DOJOBA_WORKERS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n < 1 ? 1 : n;
}

std::vector<double> score_trials(const Scorer& scorer,
                                 const std::vector<Enrollment>& enrollments,
                                 const std::vector<LabeledVector>& tests,
                                 const std::vector<Trial>& trials) {
  std::vector<double> scores(trials.size());
  const int workers =
      std::min<int>(worker_count(), static_cast<int>(trials.size()));
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      scores[k] = scorer(enrollments[trials[k].enroll].model,
                         tests[trials[k].test].features);
    }
  };
  if (workers <= 1) {
    run(0, trials.size());
    return scores;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (trials.size() + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(begin + chunk, trials.size());
    if (begin >= end) break;
    pool.emplace_back(run, begin, end);
  }
  for (auto& th : pool) th.join();
  return scores;
}

}  // namespace

ScoreReport evaluate(const std::string& system, const Scorer& scorer,
                     const std::vector<Enrollment>& enrollments,
                     const std::vector<LabeledVector>& tests) {
  return evaluate_trials(system, scorer, enrollments, tests,
                         build_trials(enrollments, tests));
}

ScoreReport evaluate_trials(const std::string& system, const Scorer& scorer,
                            const std::vector<Enrollment>& enrollments,
                            const std::vector<LabeledVector>& tests,
                            const std::vector<Trial>& trials) {
  const std::vector<double> scores =
      score_trials(scorer, enrollments, tests, trials);

  std::vector<double> tc, tw, ic, iw;
  for (std::size_t k = 0; k < trials.size(); ++k) {
    switch (trials[k].condition) {
      case TrialCondition::kTC: tc.push_back(scores[k]); break;
      case TrialCondition::kTW: tw.push_back(scores[k]); break;
      case TrialCondition::kIC: ic.push_back(scores[k]); break;
      case TrialCondition::kIW: iw.push_back(scores[k]); break;
    }
  }
  if (tc.empty()) {
    throw FormatError("evaluate: no target-correct trials");
  }

  ScoreReport report;
  report.system = system;
  auto add_row = [&](const std::string& label,
                     const std::vector<double>& nontargets) {
    if (nontargets.empty()) return;
    ConditionResult row;
    row.condition = label;
    row.eer = compute_eer(tc, nontargets);
    row.num_targets = tc.size();
    row.num_nontargets = nontargets.size();
    row.det = det_points(tc, nontargets);
    report.rows.push_back(std::move(row));
  };
  add_row("IW", iw);
  add_row("TW", tw);
  add_row("IC", ic);
  std::vector<double> pooled;
  pooled.reserve(iw.size() + tw.size() + ic.size());
  pooled.insert(pooled.end(), iw.begin(), iw.end());
  pooled.insert(pooled.end(), tw.begin(), tw.end());
  pooled.insert(pooled.end(), ic.begin(), ic.end());
  add_row("Total", pooled);
  if (report.rows.empty()) {
    throw FormatError("evaluate: no nontarget trials");
  }
  return report;
}

std::vector<Enrollment> build_enrollments(
    const std::vector<LabeledVector>& vectors) {
  if (vectors.empty()) {
    throw FormatError("build_enrollments: no enrollment vectors");
  }
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>>
      groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t n = 0; n < vectors.size(); ++n) {
    const auto key = std::make_pair(vectors[n].speaker_id,
                                    vectors[n].phrase_id);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(n);
  }
  std::vector<Enrollment> enrollments;
  enrollments.reserve(order.size());
  for (const auto& key : order) {
    Enrollment e;
    e.speaker_id = key.first;
    e.phrase_id = key.second;
    std::vector<Eigen::VectorXd> members;
    for (std::size_t n : groups[key]) {
      members.push_back(vectors[n].features);
      if (!e.sessions.insert(vectors[n].session_id).second) {
        throw FormatError("build_enrollments: duplicate session '" +
                          vectors[n].session_id + "' for speaker '" +
                          e.speaker_id + "' phrase '" + e.phrase_id + "'");
      }
    }
    e.model = enroll_average(members);
    enrollments.push_back(std::move(e));
  }
  return enrollments;
}

}  // namespace dojoba
