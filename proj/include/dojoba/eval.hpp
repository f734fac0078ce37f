// dojoba/eval.hpp

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

#ifndef DOJOBA_EVAL_HPP
#define DOJOBA_EVAL_HPP

#include <set>
#include <string>
#include <vector>

#include "dojoba/scoring.hpp"
#include "dojoba/types.hpp"

namespace dojoba {

// Trial conditions: target-correct, target speaker/wrong phrase, impostor
// with correct phrase, impostor with wrong phrase.
enum class TrialCondition { kTC, kTW, kIC, kIW };

const char* condition_name(TrialCondition c);

// One enrolled (speaker, phrase) model: the averaged enrollment vector plus
// the sessions that built it, kept for the leakage guard.
struct Enrollment {
  std::string speaker_id;
  std::string phrase_id;
  Eigen::VectorXd model;
  std::set<std::string> sessions;
};

struct Trial {
  int enroll = 0;  // index into the enrollment list
  int test = 0;    // index into the test list
  TrialCondition condition = TrialCondition::kTC;
};

// Full cross of enrollments x tests, each labeled by speaker/phrase match.
// Throws when a test vector reuses a session of its own enrollment.
std::vector<Trial> build_trials(const std::vector<Enrollment>& enrollments,
                                const std::vector<LabeledVector>& tests);

struct EerResult {
  double eer_percent = 0.0;
  double threshold = 0.0;
};

// Threshold sweep over the pooled scores with the accept-if-greater-or-
// equal convention: FAR(t) = fraction of nontargets >= t, FRR(t) =
// fraction of targets < t. The crossing is linearly interpolated between
// the bracketing sweep points.
EerResult compute_eer(const std::vector<double>& target_scores,
                      const std::vector<double>& nontarget_scores);

struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;  // fractions, not percent
  double frr = 0.0;
};

std::vector<DetPoint> det_points(const std::vector<double>& target_scores,
                                 const std::vector<double>& nontarget_scores);

struct ConditionResult {
  std::string condition;  // "IW", "TW", "IC" or "Total"
  EerResult eer;
  std::size_t num_targets = 0;
  std::size_t num_nontargets = 0;
  std::vector<DetPoint> det;
};

// Per-condition EERs against TC targets plus the pooled Total row, in the
// fixed order IW, TW, IC, Total. Conditions with no trials are omitted.
struct ScoreReport {
  std::string system;
  std::vector<ConditionResult> rows;
};

// Scores every trial (honoring the DOJOBA_WORKERS env var; ordering is
// fixed by trial order regardless of parallelism) and sweeps the EERs.
ScoreReport evaluate(const std::string& system, const Scorer& scorer,
                     const std::vector<Enrollment>& enrollments,
                     const std::vector<LabeledVector>& tests);

// Same, over an explicit trial list instead of the full cross.
ScoreReport evaluate_trials(const std::string& system, const Scorer& scorer,
                            const std::vector<Enrollment>& enrollments,
                            const std::vector<LabeledVector>& tests,
                            const std::vector<Trial>& trials);

// Groups vectors by (speaker, phrase) and averages each group.
std::vector<Enrollment> build_enrollments(
    const std::vector<LabeledVector>& vectors);

}  // namespace dojoba

#endif  // DOJOBA_EVAL_HPP
