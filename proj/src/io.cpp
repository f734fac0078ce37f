// dojoba/io.cpp

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

#include "dojoba/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dojoba {

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

std::string base64_encode(const std::vector<uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t k = 0; k < bytes.size(); k += 3) {
    uint32_t word = bytes[k] << 16;
    const std::size_t rest = bytes.size() - k;
    if (rest > 1) word |= bytes[k + 1] << 8;
    if (rest > 2) word |= bytes[k + 2];
    out.push_back(kB64Alphabet[(word >> 18) & 0x3f]);
    out.push_back(kB64Alphabet[(word >> 12) & 0x3f]);
    out.push_back(rest > 1 ? kB64Alphabet[(word >> 6) & 0x3f] : '=');
    out.push_back(rest > 2 ? kB64Alphabet[word & 0x3f] : '=');
  }
  return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) {
    throw FormatError("base64: length not a multiple of 4");
  }
  std::vector<uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t k = 0; k < text.size(); k += 4) {
    int vals[4];
    int pad = 0;
    for (int p = 0; p < 4; ++p) {
      const char c = text[k + p];
      if (c == '=' && p >= 2) {
        vals[p] = 0;
        ++pad;
        continue;
      }
      vals[p] = b64_value(c);
      if (vals[p] < 0 || pad > 0) {
        throw FormatError("base64: invalid character");
      }
    }
    const uint32_t word = (vals[0] << 18) | (vals[1] << 12) |
                          (vals[2] << 6) | vals[3];
    out.push_back((word >> 16) & 0xff);
    if (pad < 2) out.push_back((word >> 8) & 0xff);
    if (pad < 1) out.push_back(word & 0xff);
  }
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw FormatError("failed writing '" + path + "'");
}

std::string vectors_to_csv(const std::vector<LabeledVector>& vectors) {
  if (vectors.empty()) throw FormatError("vectors_to_csv: no vectors");
  const int dim = static_cast<int>(vectors.front().features.size());
  std::string out = "speaker,phrase,session";
  for (int d = 0; d < dim; ++d) out += ",f" + std::to_string(d);
  out += "\n";
  for (const auto& v : vectors) {
    out += v.speaker_id;
    out += ',';
    out += v.phrase_id;
    out += ',';
    out += v.session_id;
    for (int d = 0; d < dim; ++d) {
      out += ',';
      out += format_double(v.features[d]);
    }
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

double parse_double(const std::string& field, int line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("CSV line " + std::to_string(line_no) +
                      ": bad numeric field '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<LabeledVector> vectors_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("CSV line 1: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split(line, ',');
  if (header.size() < 4 || header[0] != "speaker" || header[1] != "phrase" ||
      header[2] != "session") {
    throw FormatError(
        "CSV line 1: expected header speaker,phrase,session,f0,...");
  }
  const int dim = static_cast<int>(header.size()) - 3;
  for (int d = 0; d < dim; ++d) {
    if (header[3 + d] != "f" + std::to_string(d)) {
      throw FormatError("CSV line 1: bad feature column name '" +
                        header[3 + d] + "'");
    }
  }

  std::vector<LabeledVector> vectors;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<int>(fields.size()) != dim + 3) {
      throw FormatError("CSV line " + std::to_string(line_no) + ": expected " +
                        std::to_string(dim + 3) + " fields, got " +
                        std::to_string(fields.size()));
    }
    LabeledVector v;
    v.speaker_id = fields[0];
    v.phrase_id = fields[1];
    v.session_id = fields[2];
    v.features.resize(dim);
    for (int d = 0; d < dim; ++d) {
      v.features[d] = parse_double(fields[3 + d], line_no);
    }
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) {
    throw FormatError("CSV: no data rows");
  }
  return vectors;
}

Dataset dataset_from_vectors(const std::vector<LabeledVector>& vectors) {
  Dataset data;
  for (const auto& v : vectors) data.add(v);
  return data;
}

namespace {

using nlohmann::json;

std::string doubles_to_b64(const double* values, std::size_t count) {
  std::vector<uint8_t> bytes(count * sizeof(double));
  for (std::size_t k = 0; k < count; ++k) {
    uint64_t bits;
    std::memcpy(&bits, &values[k], sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      bytes[k * 8 + b] = static_cast<uint8_t>((bits >> (8 * b)) & 0xff);
    }
  }
  return base64_encode(bytes);
}

std::vector<double> doubles_from_b64(const std::string& text) {
  const std::vector<uint8_t> bytes = base64_decode(text);
  if (bytes.size() % sizeof(double) != 0) {
    throw FormatError("model: float payload has bad length");
  }
  std::vector<double> values(bytes.size() / sizeof(double));
  for (std::size_t k = 0; k < values.size(); ++k) {
    uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<uint64_t>(bytes[k * 8 + b]) << (8 * b);
    }
    std::memcpy(&values[k], &bits, sizeof(double));
  }
  return values;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return doubles_to_b64(v.data(), v.size());
}

Eigen::VectorXd vector_from_json(const json& j, int expect) {
  const std::vector<double> values = doubles_from_b64(j.get<std::string>());
  if (expect >= 0 && static_cast<int>(values.size()) != expect) {
    throw FormatError("model: vector payload has wrong length");
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
}

json cov_to_json(const Covariance& c) {
  json j;
  if (c.is_diag()) {
    j["kind"] = "diag";
    j["data"] = vector_to_json(c.diag_values());
  } else {
    j["kind"] = "full";
    const Eigen::MatrixXd& m = c.full_values();
    // Row-major serialization.
    std::vector<double> values;
    values.reserve(m.size());
    for (int r = 0; r < m.rows(); ++r) {
      for (int col = 0; col < m.cols(); ++col) values.push_back(m(r, col));
    }
    j["data"] = doubles_to_b64(values.data(), values.size());
  }
  return j;
}

Covariance cov_from_json(const json& j, int dim) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "diag") {
    return Covariance::diag(vector_from_json(j.at("data"), dim));
  }
  if (kind != "full") {
    throw FormatError("model: unknown covariance kind '" + kind + "'");
  }
  const std::vector<double> values =
      doubles_from_b64(j.at("data").get<std::string>());
  if (static_cast<int>(values.size()) != dim * dim) {
    throw FormatError("model: full covariance payload has wrong length");
  }
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = values[r * dim + c];
  }
  return Covariance::full(m);
}

}  // namespace

std::string model_to_json(const ModelFile& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["kind"] = m.kind;
  j["covariance_kind"] = m.cov_kind == CovKind::kDiag ? "diag" : "full";
  if (m.kind == "dojoba") {
    j["dim"] = m.dojoba.dim();
    j["mu"] = vector_to_json(m.dojoba.mu);
    j["sigma_u"] = cov_to_json(m.dojoba.sigma_u);
    j["sigma_v"] = cov_to_json(m.dojoba.sigma_v);
    j["sigma_eps"] = cov_to_json(m.dojoba.sigma_eps);
  } else if (m.kind == "jb") {
    j["dim"] = m.jb.dim();
    j["mu"] = vector_to_json(m.jb.mu);
    j["sigma_z"] = cov_to_json(m.jb.sigma_z);
    j["sigma_eps"] = cov_to_json(m.jb.sigma_eps);
  } else {
    throw FormatError("model: unknown kind '" + m.kind + "'");
  }
  if (m.projection.has_value()) {
    json p;
    p["in_dim"] = m.projection->in_dim();
    p["out_dim"] = m.projection->out_dim();
    p["mean"] = vector_to_json(m.projection->mean);
    p["scales"] = vector_to_json(m.projection->scales);
    std::vector<double> basis;
    basis.reserve(m.projection->basis.size());
    for (int r = 0; r < m.projection->basis.rows(); ++r) {
      for (int c = 0; c < m.projection->basis.cols(); ++c) {
        basis.push_back(m.projection->basis(r, c));
      }
    }
    p["basis"] = doubles_to_b64(basis.data(), basis.size());
    j["projection"] = p;
  } else {
    j["projection"] = nullptr;
  }
  j["training"] = {{"iterations", m.iterations},
                   {"seed", m.seed},
                   {"dataset_digest", m.dataset_digest},
                   {"normalization", m.normalization}};
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    ModelFile m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != 1) {
      throw FormatError("model: unsupported schema version " +
                        std::to_string(m.schema_version));
    }
    m.kind = j.at("kind").get<std::string>();
    const std::string ck = j.at("covariance_kind").get<std::string>();
    if (ck != "diag" && ck != "full") {
      throw FormatError("model: unknown covariance_kind '" + ck + "'");
    }
    m.cov_kind = ck == "diag" ? CovKind::kDiag : CovKind::kFull;
    const int dim = j.at("dim").get<int>();
    if (m.kind == "dojoba") {
      m.dojoba.mu = vector_from_json(j.at("mu"), dim);
      m.dojoba.sigma_u = cov_from_json(j.at("sigma_u"), dim);
      m.dojoba.sigma_v = cov_from_json(j.at("sigma_v"), dim);
      m.dojoba.sigma_eps = cov_from_json(j.at("sigma_eps"), dim);
    } else if (m.kind == "jb") {
      m.jb.mu = vector_from_json(j.at("mu"), dim);
      m.jb.sigma_z = cov_from_json(j.at("sigma_z"), dim);
      m.jb.sigma_eps = cov_from_json(j.at("sigma_eps"), dim);
    } else {
      throw FormatError("model: unknown kind '" + m.kind + "'");
    }
    if (!j.at("projection").is_null()) {
      const json& p = j.at("projection");
      Projection proj;
      const int in_dim = p.at("in_dim").get<int>();
      const int out_dim = p.at("out_dim").get<int>();
      proj.mean = vector_from_json(p.at("mean"), in_dim);
      proj.scales = vector_from_json(p.at("scales"), out_dim);
      const std::vector<double> basis =
          doubles_from_b64(p.at("basis").get<std::string>());
      if (static_cast<int>(basis.size()) != in_dim * out_dim) {
        throw FormatError("model: projection basis has wrong length");
      }
      proj.basis.resize(out_dim, in_dim);
      for (int r = 0; r < out_dim; ++r) {
        for (int c = 0; c < in_dim; ++c) {
          proj.basis(r, c) = basis[r * in_dim + c];
        }
      }
      m.projection = std::move(proj);
    }
    const json& t = j.at("training");
    m.iterations = t.at("iterations").get<int>();
    m.seed = t.at("seed").get<uint64_t>();
    m.dataset_digest = t.at("dataset_digest").get<std::string>();
    m.normalization = t.at("normalization").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: missing or bad field: ") +
                      e.what());
  }
}

std::vector<TrialSpec> trials_from_tsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<TrialSpec> specs;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 4) {
      throw FormatError("trial TSV line " + std::to_string(line_no) +
                        ": expected 4 tab-separated fields, got " +
                        std::to_string(fields.size()));
    }
    specs.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  if (specs.empty()) throw FormatError("trial TSV: no trials");
  return specs;
}

namespace {

std::string fixed6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string report_to_table(const ScoreReport& report) {
  std::string out;
  out += "system: " + report.system + "\n";
  out += "condition    eer_percent      threshold  targets  nontargets\n";
  for (const auto& row : report.rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-9s %14s %14s %8zu %11zu\n",
                  row.condition.c_str(), fixed6(row.eer.eer_percent).c_str(),
                  fixed6(row.eer.threshold).c_str(), row.num_targets,
                  row.num_nontargets);
    out += buf;
  }
  return out;
}

std::string report_to_csv(const ScoreReport& report) {
  std::string out = "system,condition,eer_percent,threshold\n";
  for (const auto& row : report.rows) {
    out += report.system + "," + row.condition + "," +
           format_double(row.eer.eer_percent) + "," +
           format_double(row.eer.threshold) + "\n";
  }
  return out;
}

std::string det_to_csv(const ScoreReport& report) {
  std::string out = "system,condition,threshold,far,frr\n";
  for (const auto& row : report.rows) {
    for (const auto& point : row.det) {
      out += report.system + "," + row.condition + "," +
             format_double(point.threshold) + "," +
             format_double(point.far) + "," + format_double(point.frr) +
             "\n";
    }
  }
  return out;
}

}  // namespace dojoba
