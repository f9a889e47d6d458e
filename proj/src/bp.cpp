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

#include "toricnbm/bp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "toricnbm/errors.hpp"

namespace toricnbm {
namespace {

constexpr double kLogHalf = -0.69314718055994530942;

// Normalizes a log-domain vector into probabilities.
Quaternary softmax(const Quaternary& logv) {
  const double mx = std::max({logv[0], logv[1], logv[2], logv[3]});
  Quaternary p;
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    p[k] = std::exp(logv[k] - mx);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

}  // namespace

EdgeWeights::EdgeWeights(int layers, std::size_t num_edges, std::vector<double> values)
    : layers_(layers), num_edges_(num_edges), values_(std::move(values)) {
  if (layers_ < 1) throw ConfigError("edge weights: need at least one layer");
  if (values_.size() != static_cast<std::size_t>(layers_) * num_edges_)
    throw ConfigError("edge weights: value count does not match layers x edges");
  for (double v : values_)
    if (!std::isfinite(v)) throw ConfigError("edge weights: non-finite value");
}

EdgeWeights EdgeWeights::unit(int layers, std::size_t num_edges) {
  return EdgeWeights(layers, num_edges, std::vector<double>(static_cast<std::size_t>(layers) * num_edges, 1.0));
}

std::span<const double> EdgeWeights::layer(int t) const {
  const int k = std::min(t, layers_ - 1);
  return {values_.data() + static_cast<std::size_t>(k) * num_edges_, num_edges_};
}

TannerGraph::TannerGraph(const SparseCheckMatrix& h) {
  const std::size_t m = h.num_rows();
  const std::size_t n = h.num_qubits();
  check_ptr_.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) check_ptr_[j] = j < m ? h.row_offset(j) : h.num_edges();
  edge_qubit_.resize(h.num_edges());
  edge_check_.resize(h.num_edges());
  edge_anti_.resize(h.num_edges());
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto row = h.row(j);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::size_t e = h.row_offset(j) + k;
      edge_qubit_[e] = row[k].qubit;
      edge_check_[e] = static_cast<std::uint32_t>(j);
      std::uint8_t mask = 0;
      for (Pauli p : kAllPaulis) mask |= static_cast<std::uint8_t>(symplectic_product(row[k].pauli, p) << static_cast<int>(p));
      edge_anti_[e] = mask;
      ++degree[row[k].qubit];
    }
  }
  qubit_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) qubit_ptr_[i + 1] = qubit_ptr_[i] + degree[i];
  qubit_edges_.resize(h.num_edges());
  std::vector<std::size_t> fill(qubit_ptr_.begin(), qubit_ptr_.end() - 1);
  for (std::size_t e = 0; e < edge_qubit_.size(); ++e) qubit_edges_[fill[edge_qubit_[e]]++] = static_cast<std::uint32_t>(e);
}

void MessageState::reset(const TannerGraph& g) {
  var_dist.assign(g.num_edges(), Quaternary{});
  var_to_check.assign(g.num_edges(), 0.0);
  check_to_var.assign(g.num_edges(), 0.0);
  delta_clamped.assign(g.num_edges(), 0);
  log_factor.assign(g.num_edges(), {kLogHalf, kLogHalf});
  log_belief.assign(g.num_qubits(), Quaternary{});
  belief.assign(g.num_qubits(), Quaternary{});
  has_factors = false;
}

Quaternary log_prior(const Quaternary& prior, double floor) {
  Quaternary out;
  for (int k = 0; k < 4; ++k) out[k] = std::log(std::clamp(prior[k], floor, 1.0 - floor));
  return out;
}

void vn_to_cn_messages(const TannerGraph& g, MessageState& state, const Quaternary& log_p,
                       std::span<const double> prev_weights) {
  const bool weighted = !prev_weights.empty();
  for (std::size_t i = 0; i < g.num_qubits(); ++i) {
    const auto edges = g.qubit_edges(i);
    for (std::uint32_t e : edges) {
      Quaternary ext = log_p;
      if (state.has_factors) {
        for (std::uint32_t other : edges) {
          if (other == e) continue;
          const auto& f = state.log_factor[other];
          for (Pauli p : kAllPaulis) {
            const double a = f[g.anticommutes(other, p)];
            ext[static_cast<int>(p)] += weighted ? prev_weights[other] * a : a;
          }
        }
      }
      const Quaternary q = softmax(ext);
      state.var_dist[e] = q;
      double d = 0.0;
      for (Pauli p : kAllPaulis) d += g.anticommutes(e, p) ? -q[static_cast<int>(p)] : q[static_cast<int>(p)];
      state.var_to_check[e] = d;
    }
  }
}

void cn_to_vn_messages(const TannerGraph& g, MessageState& state, const Syndrome& s, double delta_bound) {
  for (std::size_t j = 0; j < g.num_checks(); ++j) {
    const std::size_t b = g.check_begin(j), end = g.check_end(j);
    const double sign = s[j] ? -1.0 : 1.0;
    for (std::size_t e = b; e < end; ++e) {
      double prod = sign;
      for (std::size_t o = b; o < end; ++o)
        if (o != e) prod *= state.var_to_check[o];
      if (!std::isfinite(prod)) throw InvariantViolation("bp: non-finite check message on edge " + std::to_string(e));
      const bool clamped = std::abs(prod) > delta_bound;
      const double delta = clamped ? std::copysign(delta_bound, prod) : prod;
      state.check_to_var[e] = delta;
      state.delta_clamped[e] = clamped;
      state.log_factor[e] = {std::log1p(delta) + kLogHalf, std::log1p(-delta) + kLogHalf};
    }
  }
  state.has_factors = true;
}

void update_beliefs(const TannerGraph& g, MessageState& state, const Quaternary& log_p,
                    std::span<const double> weights) {
  const bool weighted = !weights.empty();
  for (std::size_t i = 0; i < g.num_qubits(); ++i) {
    Quaternary lb = log_p;
    for (std::uint32_t e : g.qubit_edges(i)) {
      const auto& f = state.log_factor[e];
      for (Pauli p : kAllPaulis) {
        const double a = f[g.anticommutes(e, p)];
        lb[static_cast<int>(p)] += weighted ? weights[e] * a : a;
      }
    }
    state.log_belief[i] = lb;
    state.belief[i] = softmax(lb);
  }
}

PauliVector hard_decision(const MessageState& state) {
  PauliVector e(state.log_belief.size());
  for (std::size_t i = 0; i < state.log_belief.size(); ++i) {
    const auto& lb = state.log_belief[i];
    int best = 0;
    for (int k = 1; k < 4; ++k)
      if (lb[k] > lb[best]) best = k;
    e.set(i, static_cast<Pauli>(best));
  }
  return e;
}

BpDecoder::BpDecoder(const SparseCheckMatrix& h) : matrix_(h), graph_(h) {}

BpResult BpDecoder::decode(const Syndrome& s, const Quaternary& prior, const BpConfig& cfg,
                           const EdgeWeights* weights) {
  if (s.size() != graph_.num_checks())
    throw ConfigError("decode_bp: syndrome length " + std::to_string(s.size()) + " != check count " +
                      std::to_string(graph_.num_checks()));
  if (cfg.max_iterations < 1) throw ConfigError("decode_bp: max_iterations must be >= 1");
  if (weights && weights->num_edges() != graph_.num_edges())
    throw ConfigError("decode_bp: weights bound to a different matrix");

  const Quaternary log_p = log_prior(prior, cfg.prob_floor);
  state_.reset(graph_);
  BpResult result;
  for (int t = 0; t < cfg.max_iterations; ++t) {
    const std::span<const double> prev = (weights && t > 0) ? weights->layer(t - 1) : std::span<const double>{};
    const std::span<const double> cur = weights ? weights->layer(t) : std::span<const double>{};
    vn_to_cn_messages(graph_, state_, log_p, prev);
    cn_to_vn_messages(graph_, state_, s, cfg.delta_bound);
    update_beliefs(graph_, state_, log_p, cur);
    result.iterations_used = t + 1;
    result.hard_decision = hard_decision(state_);
    if (syndrome(matrix_, result.hard_decision) == s) {
      result.converged = true;
      if (cfg.early_stop) break;
    } else {
      result.converged = false;
    }
  }
  result.marginals = state_.belief;
  return result;
}

}  // namespace toricnbm
