// tests/test_io.cpp

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

#include <cstring>

#include "dojoba/io.hpp"
#include "dojoba/rng.hpp"
#include "dojoba/synth.hpp"
#include "dojoba/whiten.hpp"

using dojoba::base64_decode;
using dojoba::base64_encode;
using dojoba::Covariance;
using dojoba::FormatError;
using dojoba::ModelFile;
using dojoba::Prng;

TEST_CASE("base64 round trip") {
  Prng rng(60);
  for (int len : {0, 1, 2, 3, 17, 64}) {
    std::vector<uint8_t> bytes(len);
    for (auto& b : bytes) b = static_cast<uint8_t>(rng.next_u64() & 0xff);
    CHECK(base64_decode(base64_encode(bytes)) == bytes);
  }
  CHECK_THROWS_AS(base64_decode("abc"), FormatError);
  CHECK_THROWS_AS(base64_decode("a!=="), FormatError);
}

TEST_CASE("doubles survive the decimal round trip") {
  Prng rng(61);
  for (int k = 0; k < 200; ++k) {
    const double v = std::exp(20.0 * (rng.next_unit() - 0.5)) *
                     (rng.next_unit() < 0.5 ? -1.0 : 1.0) *
                     rng.next_gauss();
    const std::string s = dojoba::format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("vector CSV round trip preserves labels and bits") {
  dojoba::SynthSpec spec;
  spec.speakers = 3;
  spec.phrases = 2;
  spec.sessions = 2;
  spec.dim = 4;
  spec.seed = 62;
  spec.params = dojoba::random_diag_params(4, 63);
  const auto r = dojoba::sample_dataset(spec);

  const std::string csv = dojoba::vectors_to_csv(r.data.vectors());
  const auto back = dojoba::vectors_from_csv(csv);
  REQUIRE(back.size() == r.data.size());
  for (std::size_t n = 0; n < back.size(); ++n) {
    CHECK(back[n].speaker_id == r.data.vec(n).speaker_id);
    CHECK(back[n].phrase_id == r.data.vec(n).phrase_id);
    CHECK(back[n].session_id == r.data.vec(n).session_id);
    CHECK(back[n].features == r.data.vec(n).features);
  }
}

TEST_CASE("CSV errors carry the line number") {
  CHECK_THROWS_WITH_AS(dojoba::vectors_from_csv("bogus\n"),
                       doctest::Contains("line 1"), FormatError);
  const std::string good = "speaker,phrase,session,f0\na,p,1,0.5\n";
  CHECK_NOTHROW(dojoba::vectors_from_csv(good));
  const std::string bad_field =
      "speaker,phrase,session,f0\na,p,1,0.5\nb,q,1,oops\n";
  CHECK_THROWS_WITH_AS(dojoba::vectors_from_csv(bad_field),
                       doctest::Contains("line 3"), FormatError);
  const std::string short_row =
      "speaker,phrase,session,f0\na,p,1,0.5\nb,q,1\n";
  CHECK_THROWS_WITH_AS(dojoba::vectors_from_csv(short_row),
                       doctest::Contains("line 3"), FormatError);
}

TEST_CASE("model file round trip is bit exact") {
  ModelFile m;
  m.kind = "dojoba";
  m.cov_kind = dojoba::CovKind::kDiag;
  m.dojoba = dojoba::random_diag_params(5, 64);
  m.iterations = 10;
  m.seed = 1234567890123456789ULL;
  m.dataset_digest = "00ff00ff00ff00ff";
  m.normalization = "paper";

  const std::string text = dojoba::model_to_json(m);
  const ModelFile back = dojoba::model_from_json(text);
  CHECK(back.kind == "dojoba");
  CHECK(back.dojoba.mu == m.dojoba.mu);
  CHECK(back.dojoba.sigma_u.diag_values() ==
        m.dojoba.sigma_u.diag_values());
  CHECK(back.dojoba.sigma_v.diag_values() ==
        m.dojoba.sigma_v.diag_values());
  CHECK(back.dojoba.sigma_eps.diag_values() ==
        m.dojoba.sigma_eps.diag_values());
  CHECK(back.seed == m.seed);
  CHECK(back.iterations == 10);
  CHECK(!back.projection.has_value());
  // Serialization is canonical: a second save byte-matches.
  CHECK(dojoba::model_to_json(back) == text);
}

TEST_CASE("model file carries full covariances and projections") {
  Prng rng(65);
  Eigen::MatrixXd a(3, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a(r, c) = rng.next_gauss();
  }
  const Eigen::MatrixXd spd =
      a * a.transpose() + Eigen::MatrixXd::Identity(3, 3);

  ModelFile m;
  m.kind = "jb";
  m.cov_kind = dojoba::CovKind::kFull;
  m.jb.mu = Eigen::VectorXd::LinSpaced(3, -1.0, 1.0);
  m.jb.sigma_z = Covariance::full(spd);
  m.jb.sigma_eps = Covariance::full(spd * 0.5);
  m.normalization = "per-class";

  std::vector<Eigen::VectorXd> cloud;
  for (int k = 0; k < 12; ++k) {
    Eigen::VectorXd x(3);
    for (int d = 0; d < 3; ++d) x[d] = rng.next_gauss();
    cloud.push_back(std::move(x));
  }
  m.projection = dojoba::whiten_fit(cloud, 2);

  const ModelFile back = dojoba::model_from_json(dojoba::model_to_json(m));
  CHECK(back.jb.sigma_z.full_values() == m.jb.sigma_z.full_values());
  REQUIRE(back.projection.has_value());
  CHECK(back.projection->basis == m.projection->basis);
  CHECK(back.projection->scales == m.projection->scales);
  CHECK(back.projection->mean == m.projection->mean);
}

TEST_CASE("model parsing errors are format errors") {
  CHECK_THROWS_AS(dojoba::model_from_json("not json"), FormatError);
  CHECK_THROWS_AS(dojoba::model_from_json("{}"), FormatError);
  CHECK_THROWS_WITH_AS(
      dojoba::model_from_json(
          R"({"schema_version":9,"kind":"dojoba","covariance_kind":"diag"})"),
      doctest::Contains("schema"), FormatError);
}

TEST_CASE("trial TSV parsing") {
  const std::string text =
      "# comment\n"
      "s1\tp1\tt9\tTC\n"
      "s2\tp1\tt9\tIC\n";
  const auto specs = dojoba::trials_from_tsv(text);
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].enroll_speaker == "s1");
  CHECK(specs[1].expected_condition == "IC");
  CHECK_THROWS_WITH_AS(dojoba::trials_from_tsv("a\tb\tc\n"),
                       doctest::Contains("line 1"), FormatError);
}

TEST_CASE("report rendering matches the documented schema") {
  dojoba::ScoreReport report;
  report.system = "dojoba";
  dojoba::ConditionResult row;
  row.condition = "IW";
  row.eer.eer_percent = 1.25;
  row.eer.threshold = -0.5;
  row.num_targets = 10;
  row.num_nontargets = 20;
  row.det.push_back({-1.0, 1.0, 0.0});
  report.rows.push_back(row);

  const std::string csv = dojoba::report_to_csv(report);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "system,condition,eer_percent,threshold");
  CHECK(csv.find("dojoba,IW,1.25,-0.5") != std::string::npos);

  const std::string det = dojoba::det_to_csv(report);
  CHECK(det.substr(0, det.find('\n')) ==
        "system,condition,threshold,far,frr");

  const std::string table = dojoba::report_to_table(report);
  CHECK(table.find("condition") != std::string::npos);
  CHECK(table.find("IW") != std::string::npos);
}

TEST_CASE("digest is stable and content sensitive") {
  const std::string a = "speaker,phrase,session,f0\na,p,1,0.5\n";
  CHECK(dojoba::fnv1a_hex(a) == dojoba::fnv1a_hex(a));
  CHECK(dojoba::fnv1a_hex(a) != dojoba::fnv1a_hex(a + " "));
  CHECK(dojoba::fnv1a_hex(a).size() == 16);
}
