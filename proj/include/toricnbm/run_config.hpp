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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "toricnbm/simulator.hpp"
#include "toricnbm/training.hpp"

namespace toricnbm {

/// Settings shared by every subcommand, read from a JSON file and/or flags.
/// An unset field falls back to the library default of the consuming config.
struct RunConfig {
  // code and simulation
  std::optional<int> d;
  std::optional<std::vector<int>> distances;
  std::optional<double> epsilon;
  std::optional<std::vector<double>> epsilons;
  std::optional<std::string> variant;
  std::optional<std::vector<std::string>> variants;
  std::optional<std::string> weights;
  std::optional<std::uint64_t> target_failures;
  std::optional<std::uint64_t> max_shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> max_iterations;
  std::optional<std::string> out;
  // training
  std::optional<std::string> kind;
  std::optional<std::string> matrix;
  std::optional<int> iterations;
  std::optional<int> batch_size;
  std::optional<int> steps;
  std::optional<double> learning_rate;
  std::optional<std::vector<double>> epsilon_train;
  std::optional<double> grad_clip;
  std::optional<bool> share_iterations;
  std::optional<std::string> optimizer;
  std::optional<std::string> loss;
  // decode
  std::optional<std::string> syndrome;
  std::optional<std::string> second_stage;    // matching | none
  std::optional<std::string> weights_source;  // posterior | prior
  // transfer
  std::optional<int> target_d;
  // report
  std::optional<std::vector<std::string>> inputs;
  std::optional<std::string> out_dir;
};

/// Parses a JSON object. Unknown keys and ill-typed values are ConfigErrors.
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Fields set in `overrides` replace those of `base`.
RunConfig merge(const RunConfig& base, const RunConfig& overrides);

/// Effective configuration as JSON, keys sorted. `workers` is left out unless
/// asked for: it must not influence any result.
std::string to_json(const RunConfig& cfg, bool include_workers = false);

SimConfig to_sim_config(const RunConfig& cfg);
SweepConfig to_sweep_config(const RunConfig& cfg);
TrainConfig to_train_config(const RunConfig& cfg);
DecodeOptions to_decode_options(const RunConfig& cfg);

}  // namespace toricnbm
