// dojoba/jb.hpp

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

#ifndef DOJOBA_JB_HPP
#define DOJOBA_JB_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dojoba/em.hpp"
#include "dojoba/types.hpp"

namespace dojoba {

// How baseline classes are formed: the combined (speaker, phrase) label or
// the speaker label alone.
enum class ClassMode { kSpeakerPhrase, kSpeakerOnly };

// class_id -> member vector indices; classes partition the dataset.
struct ClassView {
  std::vector<std::string> class_ids;
  std::map<std::string, std::vector<std::size_t>> members;
};

ClassView build_class_view(const Dataset& data, ClassMode mode);

// Rewrites labels so the class becomes the speaker axis and the phrase axis
// collapses to a single label; feeds the constrained two-latent path.
Dataset relabel_by_class(const Dataset& data, ClassMode mode);

// Single-latent baseline x = mu + z_class + eps, trained as the two-latent
// model constrained to a pinned sigma_v on the relabeled dataset.
std::pair<JbParams, FitDiagnostics> fit_jb(
    const Dataset& data, const FitConfig& cfg,
    ClassMode mode = ClassMode::kSpeakerPhrase);

// View of the baseline as a two-latent model with a zero phrase covariance;
// lets jb models reuse the exact likelihood evaluator and scorers.
DojobaParams jb_as_dojoba(const JbParams& params);

}  // namespace dojoba

#endif  // DOJOBA_JB_HPP
