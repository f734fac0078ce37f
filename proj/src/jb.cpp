// dojoba/jb.cpp

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

#include "dojoba/jb.hpp"

namespace dojoba {

namespace {

// Separator that cannot occur in CSV-sourced labels.
constexpr char kSep = '\x1f';

std::string class_label(const LabeledVector& v, ClassMode mode) {
  if (mode == ClassMode::kSpeakerOnly) return v.speaker_id;
  return v.speaker_id + kSep + v.phrase_id;
}

}  // namespace

ClassView build_class_view(const Dataset& data, ClassMode mode) {
  ClassView view;
  for (std::size_t n = 0; n < data.size(); ++n) {
    const std::string label = class_label(data.vec(n), mode);
    auto [it, inserted] = view.members.try_emplace(label);
    if (inserted) view.class_ids.push_back(label);
    it->second.push_back(n);
  }
  return view;
}

Dataset relabel_by_class(const Dataset& data, ClassMode mode) {
  Dataset out;
  for (std::size_t n = 0; n < data.size(); ++n) {
    const LabeledVector& v = data.vec(n);
    LabeledVector r;
    r.features = v.features;
    r.speaker_id = class_label(v, mode);
    r.phrase_id = "_";
    // Sessions stay unique within the class even when the class merges
    // several phrases.
    r.session_id = v.phrase_id + kSep + v.session_id;
    out.add(std::move(r));
  }
  return out;
}

std::pair<JbParams, FitDiagnostics> fit_jb(const Dataset& data,
                                           const FitConfig& cfg,
                                           ClassMode mode) {
  FitConfig constrained = cfg;
  constrained.pin_sigma_v = true;
  auto [params, diags] = fit(relabel_by_class(data, mode), constrained);
  JbParams jb;
  jb.mu = std::move(params.mu);
  jb.sigma_z = std::move(params.sigma_u);
  jb.sigma_eps = std::move(params.sigma_eps);
  return {std::move(jb), std::move(diags)};
}

DojobaParams jb_as_dojoba(const JbParams& params) {
  DojobaParams p;
  p.mu = params.mu;
  p.sigma_u = params.sigma_z;
  p.sigma_v = Covariance::zeros(params.dim(), params.sigma_z.kind());
  p.sigma_eps = params.sigma_eps;
  return p;
}

}  // namespace dojoba
