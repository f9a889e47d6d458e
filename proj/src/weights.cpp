// Copyright 2026 The toricnbm Authors
//
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

#include "toricnbm/weights.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toricnbm/errors.hpp"

namespace toricnbm {
namespace {

using json = nlohmann::json;

void check_shape(const WeightSet& ws) {
  if (ws.iterations < 1) throw ConfigError("weight set: iterations must be >= 1");
  if (ws.values.empty() || ws.values.size() % static_cast<std::size_t>(ws.iterations) != 0)
    throw ConfigError("weight set: value count is not a multiple of the iteration count");
  if (ws.kind == WeightKind::Conv && ws.values_per_iteration() != kNumEdgeClasses)
    throw ConfigError("weight set: conv sets hold 32 values per iteration");
}

struct Fnv {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
};

}  // namespace

std::string to_string(WeightKind k) { return k == WeightKind::Dense ? "dense" : "conv"; }

WeightKind weight_kind_from_string(const std::string& s) {
  if (s == "dense") return WeightKind::Dense;
  if (s == "conv") return WeightKind::Conv;
  throw ConfigError("unknown weight kind '" + s + "'");
}

WeightSet init_unit(WeightKind kind, int iterations, const ToricCode& code, MatrixKind matrix) {
  if (iterations < 1) throw ConfigError("init_unit: iterations must be >= 1");
  WeightSet ws;
  ws.kind = kind;
  ws.iterations = iterations;
  ws.distance = code.distance;
  ws.matrix = matrix;
  const std::size_t per = kind == WeightKind::Conv ? kNumEdgeClasses : code.matrix(matrix).num_edges();
  ws.values.assign(per * static_cast<std::size_t>(iterations), 1.0);
  return ws;
}

EdgeWeights bind(const WeightSet& ws, const ToricCode& code) {
  check_shape(ws);
  if (ws.class_convention != edge_class_convention_hash())
    throw ConfigError("weight set uses a different edge-class convention");
  const std::size_t edges = code.matrix(ws.matrix).num_edges();
  if (ws.kind == WeightKind::Dense) {
    if (ws.distance != code.distance || ws.values_per_iteration() != edges)
      throw ConfigError("dense weights were bound to d=" + std::to_string(ws.distance) + ", cannot use them at d=" +
                        std::to_string(code.distance));
    return EdgeWeights(ws.iterations, edges, ws.values);
  }
  const auto classes = build_edge_classes(code, ws.matrix);
  std::vector<double> out(static_cast<std::size_t>(ws.iterations) * edges);
  for (int t = 0; t < ws.iterations; ++t) {
    const double* layer = ws.values.data() + static_cast<std::size_t>(t) * kNumEdgeClasses;
    for (std::size_t e = 0; e < edges; ++e) out[t * edges + e] = layer[classes.class_of_edge[e]];
  }
  return EdgeWeights(ws.iterations, edges, std::move(out));
}

WeightSet transfer(const WeightSet& ws, const ToricCode& target) {
  if (ws.kind != WeightKind::Conv) throw ConfigError("transfer: only conv weight sets can be transferred");
  if (ws.format_version != kWeightFormatVersion) throw ConfigError("transfer: unsupported format version");
  const EdgeWeights bound = bind(ws, target);
  WeightSet out = ws;
  out.kind = WeightKind::Dense;
  out.distance = target.distance;
  out.values = bound.values();
  out.transferred_from = ws.distance;
  return out;
}

std::vector<double> reduce_to_set(const WeightSet& ws, const ToricCode& code, std::span<const double> per_edge,
                                  int layers) {
  const std::size_t edges = code.matrix(ws.matrix).num_edges();
  if (per_edge.size() != static_cast<std::size_t>(layers) * edges)
    throw ConfigError("reduce_to_set: per-edge array has the wrong size");
  if (ws.kind == WeightKind::Dense) return {per_edge.begin(), per_edge.end()};
  const auto classes = build_edge_classes(code, ws.matrix);
  std::vector<double> out(static_cast<std::size_t>(layers) * kNumEdgeClasses, 0.0);
  for (int t = 0; t < layers; ++t)
    for (std::size_t e = 0; e < edges; ++e) out[t * kNumEdgeClasses + classes.class_of_edge[e]] += per_edge[t * edges + e];
  return out;
}

double loss(std::span<const std::vector<Quaternary>> marginals_per_iteration, const PauliVector& error) {
  if (marginals_per_iteration.empty()) return 0.0;
  double total = 0.0;
  std::size_t terms = 0;
  for (const auto& q : marginals_per_iteration) {
    if (q.size() != error.size()) throw ConfigError("loss: marginal count does not match error length");
    for (std::size_t i = 0; i < q.size(); ++i) {
      total -= std::log(std::max(q[i][static_cast<int>(error[i])], 1e-12));
      ++terms;
    }
  }
  return total / static_cast<double>(terms);
}

std::string weight_checksum(const WeightSet& ws) {
  Fnv f;
  f.u64(static_cast<std::uint64_t>(ws.format_version));
  f.str(to_string(ws.kind));
  f.u64(static_cast<std::uint64_t>(ws.iterations));
  f.u64(static_cast<std::uint64_t>(ws.distance));
  f.str(to_string(ws.matrix));
  f.u64(std::bit_cast<std::uint64_t>(ws.trained_epsilon));
  f.str(ws.class_convention);
  f.u64(ws.transferred_from ? static_cast<std::uint64_t>(*ws.transferred_from) + 1 : 0);
  f.u64(ws.values.size());
  for (double v : ws.values) f.u64(std::bit_cast<std::uint64_t>(v));
  std::ostringstream out;
  out << std::hex << f.h;
  return out.str();
}

std::string to_json(const WeightSet& ws) {
  check_shape(ws);
  json j;
  j["format_version"] = ws.format_version;
  j["kind"] = to_string(ws.kind);
  j["T"] = ws.iterations;
  j["d"] = ws.distance;
  j["matrix"] = to_string(ws.matrix);
  j["epsilon_train"] = ws.trained_epsilon;
  j["class_convention_hash"] = ws.class_convention;
  if (ws.transferred_from) j["transferred_from_d"] = *ws.transferred_from;
  j["values"] = ws.values;
  j["checksum"] = weight_checksum(ws);
  return j.dump(1);
}

WeightSet weights_from_json(const std::string& text) {
  using R = WeightFileError::Reason;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw WeightFileError(R::Integrity, std::string("weight file is corrupt or truncated: ") + e.what());
  }
  WeightSet ws;
  std::string checksum;
  try {
    ws.format_version = j.at("format_version").get<int>();
    if (ws.format_version != kWeightFormatVersion)
      throw WeightFileError(R::Version, "weight file format version " + std::to_string(ws.format_version) +
                                            " is not supported (expected " + std::to_string(kWeightFormatVersion) + ")");
    ws.kind = weight_kind_from_string(j.at("kind").get<std::string>());
    ws.iterations = j.at("T").get<int>();
    ws.distance = j.at("d").get<int>();
    ws.matrix = matrix_kind_from_string(j.at("matrix").get<std::string>());
    ws.trained_epsilon = j.at("epsilon_train").get<double>();
    ws.class_convention = j.at("class_convention_hash").get<std::string>();
    if (j.contains("transferred_from_d")) ws.transferred_from = j.at("transferred_from_d").get<int>();
    ws.values = j.at("values").get<std::vector<double>>();
    checksum = j.at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    throw WeightFileError(R::Schema, std::string("weight file schema error: ") + e.what());
  } catch (const ConfigError& e) {
    throw WeightFileError(R::Schema, std::string("weight file schema error: ") + e.what());
  }
  if (checksum != weight_checksum(ws)) throw WeightFileError(R::Integrity, "weight file checksum mismatch");
  if (ws.class_convention != edge_class_convention_hash())
    throw WeightFileError(R::Convention, "weight file was written under edge-class convention " + ws.class_convention +
                                             ", this build uses " + edge_class_convention_hash());
  try {
    check_shape(ws);
  } catch (const ConfigError& e) {
    throw WeightFileError(R::Schema, e.what());
  }
  return ws;
}

void save_weights(const WeightSet& ws, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_json(ws) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

WeightSet load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weight file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return weights_from_json(buf.str());
}

}  // namespace toricnbm
