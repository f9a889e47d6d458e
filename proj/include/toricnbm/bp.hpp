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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "toricnbm/noise.hpp"
#include "toricnbm/pauli.hpp"

namespace toricnbm {

// Quaternary belief propagation with scalar messages.
//
// Every Tanner edge (j, i) carries the check's Pauli h = H[j][i]. A qubit
// error E either commutes or anticommutes with h, so each message reduces to
// one scalar:
//
//   variable -> check   d = q(E commutes with h) - q(E anticommutes with h)
//   check -> variable   delta = (-1)^{s_j} * prod_{i' != i} d_{i' -> j}
//
// and the check's factor on qubit i is r(E) = (1 +- delta) / 2. Beliefs are
// formed in the log domain, log Q_i(E) = log P(E) + sum_j w_{j,i} log r_{j->i}(E)
// up to normalization; w = 1 everywhere is plain BP.

struct BpConfig {
  int max_iterations = 8;
  double prob_floor = 1e-12;          // prior entries clamped to [floor, 1 - floor]
  double delta_bound = 1.0 - 1e-12;   // |delta| clamp
  bool early_stop = true;
};

struct BpResult {
  std::vector<Quaternary> marginals;
  PauliVector hard_decision;
  bool converged = false;
  int iterations_used = 0;
};

/// Message weights bound to the Tanner edges of one matrix. Layer t scales
/// the factors produced in iteration t + 1; iterations past the last layer
/// reuse the last layer.
class EdgeWeights {
 public:
  EdgeWeights() = default;
  EdgeWeights(int layers, std::size_t num_edges, std::vector<double> values);
  static EdgeWeights unit(int layers, std::size_t num_edges);

  int layers() const { return layers_; }
  std::size_t num_edges() const { return num_edges_; }
  std::span<const double> layer(int t) const;
  const std::vector<double>& values() const { return values_; }
  friend bool operator==(const EdgeWeights&, const EdgeWeights&) = default;

 private:
  int layers_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<double> values_;
};

/// Immutable adjacency of a check matrix, shared by all decoder instances.
class TannerGraph {
 public:
  explicit TannerGraph(const SparseCheckMatrix& h);

  std::size_t num_checks() const { return check_ptr_.size() - 1; }
  std::size_t num_qubits() const { return qubit_ptr_.size() - 1; }
  std::size_t num_edges() const { return edge_qubit_.size(); }

  std::size_t check_begin(std::size_t j) const { return check_ptr_[j]; }
  std::size_t check_end(std::size_t j) const { return check_ptr_[j + 1]; }
  std::span<const std::uint32_t> qubit_edges(std::size_t i) const {
    return {qubit_edges_.data() + qubit_ptr_[i], qubit_ptr_[i + 1] - qubit_ptr_[i]};
  }
  std::uint32_t edge_qubit(std::size_t e) const { return edge_qubit_[e]; }
  std::uint32_t edge_check(std::size_t e) const { return edge_check_[e]; }
  /// True iff Pauli p anticommutes with the edge's check Pauli.
  bool anticommutes(std::size_t e, Pauli p) const { return (edge_anti_[e] >> static_cast<int>(p)) & 1; }

 private:
  std::vector<std::size_t> check_ptr_;
  std::vector<std::size_t> qubit_ptr_;
  std::vector<std::uint32_t> qubit_edges_;
  std::vector<std::uint32_t> edge_qubit_;
  std::vector<std::uint32_t> edge_check_;
  std::vector<std::uint8_t> edge_anti_;
};

/// Per-edge messages of the current iteration plus per-qubit log beliefs.
struct MessageState {
  std::vector<Quaternary> var_dist;            // extrinsic q_{i->j}, per edge
  std::vector<double> var_to_check;            // d_{i->j}
  std::vector<double> check_to_var;            // delta_{j->i}, after clamping
  std::vector<std::uint8_t> delta_clamped;
  std::vector<std::array<double, 2>> log_factor;  // log r(commute), log r(anticommute)
  std::vector<Quaternary> log_belief;          // unnormalized
  std::vector<Quaternary> belief;              // normalized Q_i
  bool has_factors = false;

  void reset(const TannerGraph& g);
};

/// Clamped log prior used by every update.
Quaternary log_prior(const Quaternary& prior, double floor);

/// Variable-to-check update. Uses the factors of the previous iteration
/// (scaled by `prev_weights` when non-empty) or, before any check message
/// exists, the prior alone.
void vn_to_cn_messages(const TannerGraph& g, MessageState& state, const Quaternary& log_p,
                       std::span<const double> prev_weights);

void cn_to_vn_messages(const TannerGraph& g, MessageState& state, const Syndrome& s, double delta_bound);

void update_beliefs(const TannerGraph& g, MessageState& state, const Quaternary& log_p,
                    std::span<const double> weights);

/// Per-qubit argmax of the beliefs; ties resolve in the order I, X, Y, Z.
PauliVector hard_decision(const MessageState& state);

/// One decoder instance per worker; owns its message scratch.
class BpDecoder {
 public:
  explicit BpDecoder(const SparseCheckMatrix& h);

  const TannerGraph& graph() const { return graph_; }
  const SparseCheckMatrix& matrix() const { return matrix_; }

  BpResult decode(const Syndrome& s, const Quaternary& prior, const BpConfig& cfg,
                  const EdgeWeights* weights = nullptr);

 private:
  SparseCheckMatrix matrix_;
  TannerGraph graph_;
  MessageState state_;
};

}  // namespace toricnbm
