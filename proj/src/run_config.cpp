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

#include "toricnbm/run_config.hpp"

#include <fstream>
#include <sstream>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "toricnbm/errors.hpp"

namespace toricnbm {
namespace {

using json = nlohmann::json;

// Visits every field with its JSON key. Works on const and non-const configs.
template <typename Cfg, typename F>
void for_each_field(Cfg& c, F&& f) {
  f("d", c.d);
  f("distances", c.distances);
  f("epsilon", c.epsilon);
  f("epsilons", c.epsilons);
  f("variant", c.variant);
  f("variants", c.variants);
  f("weights", c.weights);
  f("target_failures", c.target_failures);
  f("max_shots", c.max_shots);
  f("seed", c.seed);
  f("workers", c.workers);
  f("max_iterations", c.max_iterations);
  f("out", c.out);
  f("kind", c.kind);
  f("matrix", c.matrix);
  f("iterations", c.iterations);
  f("batch_size", c.batch_size);
  f("steps", c.steps);
  f("learning_rate", c.learning_rate);
  f("epsilon_train", c.epsilon_train);
  f("grad_clip", c.grad_clip);
  f("share_iterations", c.share_iterations);
  f("optimizer", c.optimizer);
  f("loss", c.loss);
  f("syndrome", c.syndrome);
  f("second_stage", c.second_stage);
  f("weights_source", c.weights_source);
  f("target_d", c.target_d);
  f("inputs", c.inputs);
  f("out_dir", c.out_dir);
}

template <typename T>
void read_value(const json& j, const std::string& key, std::optional<T>& field) {
  try {
    if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!j.is_number_unsigned()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, int>) {
      if (!j.is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      // A scalar is accepted where a list is expected.
      if (j.is_number()) {
        field = std::vector<double>{j.get<double>()};
        return;
      }
    }
    field = j.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  std::size_t known = 0;
  for_each_field(cfg, [&](const char* key, auto& field) {
    if (auto it = j.find(key); it != j.end()) {
      read_value(*it, key, field);
      ++known;
    }
  });
  if (known != j.size()) {
    for (const auto& [key, value] : j.items()) {
      bool found = false;
      for_each_field(cfg, [&](const char* k, auto&) { found = found || key == k; });
      if (!found) throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

RunConfig merge(const RunConfig& base, const RunConfig& overrides) {
  RunConfig out = base;
  // Pair fields up by key.
  for_each_field(out, [&](const char* key, auto& dst) {
    for_each_field(overrides, [&](const char* k, const auto& from) {
      if constexpr (std::is_same_v<std::decay_t<decltype(dst)>, std::decay_t<decltype(from)>>)
        if (std::string_view(key) == k && from) dst = from;
    });
  });
  return out;
}

std::string to_json(const RunConfig& cfg, bool include_workers) {
  json j = json::object();
  for_each_field(cfg, [&](const char* key, const auto& field) {
    if (!field) return;
    if (!include_workers && std::string_view(key) == "workers") return;
    j[key] = *field;
  });
  return j.dump();
}

SimConfig to_sim_config(const RunConfig& c) {
  SimConfig s;
  if (c.d) s.distance = *c.d;
  if (c.epsilon) s.epsilon = *c.epsilon;
  if (c.variant) s.variant = variant_from_string(*c.variant);
  if (c.weights) s.weights_file = *c.weights;
  if (c.target_failures) s.target_failures = *c.target_failures;
  if (c.max_shots) s.max_shots = *c.max_shots;
  if (c.seed) s.seed = *c.seed;
  s.workers = c.workers ? *c.workers : default_workers();
  if (c.max_iterations) s.max_iterations = *c.max_iterations;
  s.validate();
  return s;
}

SweepConfig to_sweep_config(const RunConfig& c) {
  SweepConfig s;
  if (c.distances) s.distances = *c.distances;
  else if (c.d) s.distances = {*c.d};
  if (c.epsilons) s.epsilons = *c.epsilons;
  else if (c.epsilon) s.epsilons = {*c.epsilon};
  if (c.variants || c.variant) {
    s.variants.clear();
    for (const auto& v : c.variants ? *c.variants : std::vector<std::string>{*c.variant})
      s.variants.push_back(variant_from_string(v));
  }
  if (c.weights) s.weights_file = *c.weights;
  if (c.target_failures) s.target_failures = *c.target_failures;
  if (c.max_shots) s.max_shots = *c.max_shots;
  if (c.seed) s.seed = *c.seed;
  s.workers = c.workers ? *c.workers : default_workers();
  if (c.max_iterations) s.max_iterations = *c.max_iterations;
  if (s.distances.empty() || s.epsilons.empty() || s.variants.empty())
    throw ConfigError("sweep: distances, epsilons and variants must be non-empty");
  // Validate every grid point before any work starts.
  for (int d : s.distances)
    for (double e : s.epsilons) {
      SimConfig p;
      p.distance = d;
      p.epsilon = e;
      p.target_failures = s.target_failures;
      p.max_shots = s.max_shots;
      p.workers = s.workers;
      p.max_iterations = s.max_iterations;
      p.validate();
    }
  return s;
}

TrainConfig to_train_config(const RunConfig& c) {
  TrainConfig t;
  if (c.kind) t.kind = weight_kind_from_string(*c.kind);
  if (c.matrix) t.matrix = matrix_kind_from_string(*c.matrix);
  if (c.iterations) t.iterations = *c.iterations;
  if (c.batch_size) t.batch_size = *c.batch_size;
  if (c.steps) t.steps = *c.steps;
  if (c.learning_rate) t.learning_rate = *c.learning_rate;
  if (c.epsilon_train) t.epsilons = *c.epsilon_train;
  if (c.grad_clip) t.grad_clip = *c.grad_clip;
  if (c.seed) t.seed = *c.seed;
  if (c.share_iterations) t.share_iterations = *c.share_iterations;
  if (c.optimizer) t.optimizer = *c.optimizer;
  if (c.loss) t.loss = *c.loss;
  t.workers = c.workers ? *c.workers : default_workers();
  t.validate();
  return t;
}

DecodeOptions to_decode_options(const RunConfig& c) {
  DecodeOptions o;
  if (c.second_stage) {
    if (*c.second_stage == "matching") o.second_stage = true;
    else if (*c.second_stage == "none") o.second_stage = false;
    else throw ConfigError("second_stage must be 'matching' or 'none'");
  }
  if (c.weights_source) {
    if (*c.weights_source == "posterior") o.posterior_weights = true;
    else if (*c.weights_source == "prior") o.posterior_weights = false;
    else throw ConfigError("weights_source must be 'posterior' or 'prior'");
  }
  return o;
}

}  // namespace toricnbm
