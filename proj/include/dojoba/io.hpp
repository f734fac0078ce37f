// dojoba/io.hpp

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

#ifndef DOJOBA_IO_HPP
#define DOJOBA_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dojoba/eval.hpp"
#include "dojoba/types.hpp"
#include "dojoba/whiten.hpp"

namespace dojoba {

// Shortest decimal that round-trips the exact double value.
std::string format_double(double v);

std::string base64_encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

// FNV-1a 64 over raw bytes, as a hex string.
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Vector CSV: header `speaker,phrase,session,f0,...,f{D-1}`, one labeled
// vector per row, values in round-trip decimal form.
std::string vectors_to_csv(const std::vector<LabeledVector>& vectors);
std::vector<LabeledVector> vectors_from_csv(const std::string& text);

Dataset dataset_from_vectors(const std::vector<LabeledVector>& vectors);

// Versioned JSON model file; float payloads are base64 little-endian
// float64 so load(save(m)) reproduces parameters bit-exactly.
struct ModelFile {
  int schema_version = 1;
  std::string kind;  // "dojoba" or "jb"
  CovKind cov_kind = CovKind::kDiag;
  DojobaParams dojoba;  // populated when kind == "dojoba"
  JbParams jb;          // populated when kind == "jb"
  std::optional<Projection> projection;
  int iterations = 0;
  uint64_t seed = 0;
  std::string dataset_digest;
  std::string normalization;  // "paper" or "per-class"
};

std::string model_to_json(const ModelFile& m);
ModelFile model_from_json(const std::string& text);

// Explicit trial list (TSV): enroll_speaker, enroll_phrase, test_session,
// expected_condition.
struct TrialSpec {
  std::string enroll_speaker;
  std::string enroll_phrase;
  std::string test_session;
  std::string expected_condition;
};

std::vector<TrialSpec> trials_from_tsv(const std::string& text);

// Aligned text table of a report, Table-style: one row per condition.
std::string report_to_table(const ScoreReport& report);

// CSV schema: system,condition,eer_percent,threshold.
std::string report_to_csv(const ScoreReport& report);

// CSV schema: system,condition,threshold,far,frr.
std::string det_to_csv(const ScoreReport& report);

}  // namespace dojoba

#endif  // DOJOBA_IO_HPP
