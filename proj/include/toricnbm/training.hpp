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
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toricnbm/bp.hpp"
#include "toricnbm/toric_code.hpp"
#include "toricnbm/weights.hpp"

namespace toricnbm {

struct TrainConfig {
  WeightKind kind = WeightKind::Conv;
  MatrixKind matrix = MatrixKind::Overcomplete;
  int iterations = 8;
  int batch_size = 64;
  int steps = 2000;
  double learning_rate = 0.01;
  std::vector<double> epsilons{0.1};  // one value, or a mixture sampled uniformly per shot
  double grad_clip = 10.0;            // global L2 norm
  std::uint64_t seed = 1;
  bool share_iterations = false;      // tie all iteration layers together
  std::string optimizer = "adam";
  std::string loss = "cross-entropy";  // or "soft-syndrome"
  int workers = 1;

  void validate() const;
};

struct LossReport {
  std::vector<double> losses;  // mean batch loss per step
  std::string final_checksum;
  std::string config_echo;     // JSON
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(const std::string& what, LossReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const LossReport& report() const { return report_; }

 private:
  LossReport report_;
};

/// Marginals of every iteration of an unrolled run (no early stop).
std::vector<std::vector<Quaternary>> unrolled_marginals(const TannerGraph& g, const Syndrome& s,
                                                        const Quaternary& prior, const BpConfig& cfg,
                                                        const EdgeWeights* weights);

/// Training objectives.
///
/// CrossEntropy: mean over iterations and qubits of -log Q_i(e_i).
/// SoftSyndrome: mean over iterations and normalizer rows S (the check rows
/// plus `logicals`) of |sin(pi/2 * sum_i P[residual_i anticommutes with S_i])|,
/// where residual_i = E_i * e_i and E_i ~ Q_i. It vanishes for any correction
/// equivalent to e up to stabilizers, so it does not penalize breaking ties
/// between degenerate corrections.
enum class LossKind { CrossEntropy, SoftSyndrome };
std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

struct LossSpec {
  LossKind kind = LossKind::CrossEntropy;
  std::span<const PauliVector> logicals;  // extra rows for SoftSyndrome
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> grad;  // layers x edges, same layout as EdgeWeights
};

/// Runs cfg.max_iterations unrolled iterations, evaluates the loss against
/// `error` and back-propagates it to every bound weight.
LossAndGradient loss_and_gradient(const TannerGraph& g, const Syndrome& s, const Quaternary& prior,
                                  const BpConfig& cfg, const EdgeWeights& weights, const PauliVector& error,
                                  const LossSpec& spec = {});

/// Gradient in the layout of `ws` (class sums for Conv sets).
std::vector<double> gradient(const ToricCode& code, const Syndrome& s, const Quaternary& prior, const BpConfig& cfg,
                             const WeightSet& ws, const PauliVector& error, double* loss_out = nullptr,
                             LossKind kind = LossKind::CrossEntropy);

/// Trains a weight set with errors drawn on the fly. Deterministic for a given
/// seed, whatever the worker count.
std::pair<WeightSet, LossReport> train(const ToricCode& code, const TrainConfig& cfg);

std::string to_json(const TrainConfig& cfg);

}  // namespace toricnbm
