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

#include "toricnbm/training.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "toricnbm/errors.hpp"
#include "toricnbm/noise.hpp"

namespace toricnbm {
namespace {

struct Tape {
  std::vector<MessageState> states;  // one snapshot per iteration
};

Tape forward(const TannerGraph& g, const Syndrome& s, const Quaternary& log_p, const BpConfig& cfg,
             const EdgeWeights* weights) {
  if (s.size() != g.num_checks()) throw ConfigError("unrolled BP: syndrome length mismatch");
  Tape tape;
  MessageState state;
  state.reset(g);
  for (int t = 0; t < cfg.max_iterations; ++t) {
    const std::span<const double> prev = (weights && t > 0) ? weights->layer(t - 1) : std::span<const double>{};
    const std::span<const double> cur = weights ? weights->layer(t) : std::span<const double>{};
    vn_to_cn_messages(g, state, log_p, prev);
    cn_to_vn_messages(g, state, s, cfg.delta_bound);
    update_beliefs(g, state, log_p, cur);
    tape.states.push_back(state);
  }
  return tape;
}

Pauli times(Pauli a, Pauli b) { return pauli_from_bits(x_bit(a) != x_bit(b), z_bit(a) != z_bit(b)); }

// Soft-syndrome loss of one iteration and its adjoint with respect to the
// normalized beliefs Q. Returns the (scaled) loss; accumulates into g_q.
double soft_syndrome_term(const TannerGraph& g, const std::vector<Quaternary>& q, const PauliVector& error,
                          std::span<const PauliVector> logicals, double scale, std::vector<Quaternary>& g_q) {
  constexpr double kHalfPi = 1.57079632679489661923;
  double total = 0.0;
  auto row_term = [&](double x) {
    const double sn = std::sin(kHalfPi * x);
    total += std::abs(sn) * scale;
    return (sn > 0 ? 1.0 : sn < 0 ? -1.0 : 0.0) * kHalfPi * std::cos(kHalfPi * x) * scale;
  };
  for (std::size_t j = 0; j < g.num_checks(); ++j) {
    double x = 0.0;
    for (std::size_t e = g.check_begin(j); e < g.check_end(j); ++e) {
      const std::size_t i = g.edge_qubit(e);
      for (Pauli p : kAllPaulis)
        if (g.anticommutes(e, times(p, error[i]))) x += q[i][static_cast<int>(p)];
    }
    const double dx = row_term(x);
    for (std::size_t e = g.check_begin(j); e < g.check_end(j); ++e) {
      const std::size_t i = g.edge_qubit(e);
      for (Pauli p : kAllPaulis)
        if (g.anticommutes(e, times(p, error[i]))) g_q[i][static_cast<int>(p)] += dx;
    }
  }
  for (const auto& l : logicals) {
    double x = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i)
      for (Pauli p : kAllPaulis)
        if (symplectic_product(l[i], times(p, error[i]))) x += q[i][static_cast<int>(p)];
    const double dx = row_term(x);
    for (std::size_t i = 0; i < l.size(); ++i)
      for (Pauli p : kAllPaulis)
        if (symplectic_product(l[i], times(p, error[i]))) g_q[i][static_cast<int>(p)] += dx;
  }
  return total;
}

double log_sum_exp(const Quaternary& v) {
  const double mx = std::max({v[0], v[1], v[2], v[3]});
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace

void TrainConfig::validate() const {
  if (iterations < 1) throw ConfigError("train: iterations must be >= 1");
  if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
  if (steps < 0) throw ConfigError("train: steps must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning rate must be positive");
  if (!(grad_clip > 0.0)) throw ConfigError("train: gradient clip must be positive");
  if (epsilons.empty()) throw ConfigError("train: need at least one training epsilon");
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("train: training epsilon must lie in (0, 1)");
  if (optimizer != "adam") throw ConfigError("train: unsupported optimizer '" + optimizer + "'");
  loss_kind_from_string(loss);
  if (workers < 1) throw ConfigError("train: workers must be >= 1");
}

std::string to_string(LossKind k) { return k == LossKind::CrossEntropy ? "cross-entropy" : "soft-syndrome"; }

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "cross-entropy") return LossKind::CrossEntropy;
  if (s == "soft-syndrome") return LossKind::SoftSyndrome;
  throw ConfigError("unsupported loss '" + s + "'");
}

std::vector<std::vector<Quaternary>> unrolled_marginals(const TannerGraph& g, const Syndrome& s,
                                                        const Quaternary& prior, const BpConfig& cfg,
                                                        const EdgeWeights* weights) {
  const Tape tape = forward(g, s, log_prior(prior, cfg.prob_floor), cfg, weights);
  std::vector<std::vector<Quaternary>> out;
  out.reserve(tape.states.size());
  for (const auto& st : tape.states) out.push_back(st.belief);
  return out;
}

LossAndGradient loss_and_gradient(const TannerGraph& g, const Syndrome& s, const Quaternary& prior,
                                  const BpConfig& cfg, const EdgeWeights& weights, const PauliVector& error,
                                  const LossSpec& spec) {
  if (weights.num_edges() != g.num_edges()) throw ConfigError("gradient: weights bound to a different matrix");
  if (error.size() != g.num_qubits()) throw ConfigError("gradient: error length mismatch");
  const Quaternary log_p = log_prior(prior, cfg.prob_floor);
  const Tape tape = forward(g, s, log_p, cfg, &weights);
  const int T = cfg.max_iterations;
  const std::size_t E = g.num_edges();
  const std::size_t n = g.num_qubits();
  const double scale = 1.0 / (static_cast<double>(T) * static_cast<double>(n));

  LossAndGradient out;
  out.grad.assign(static_cast<std::size_t>(weights.layers()) * E, 0.0);

  // Adjoint of the extrinsic log distributions feeding iteration t + 1.
  std::vector<Quaternary> g_ext_next(E, Quaternary{});
  std::vector<Quaternary> g_ext(E);
  std::vector<std::array<double, 2>> g_factor(E);
  std::vector<double> g_delta(E), g_d(E);
  const bool soft = spec.kind == LossKind::SoftSyndrome;
  const double soft_scale = 1.0 / (static_cast<double>(T) * static_cast<double>(g.num_checks() + spec.logicals.size()));
  std::vector<Quaternary> g_q(soft ? n : 0);

  for (int t = T - 1; t >= 0; --t) {
    const MessageState& st = tape.states[t];
    const int layer = std::min(t, weights.layers() - 1);
    const auto w = weights.layer(t);
    double* gw = out.grad.data() + static_cast<std::size_t>(layer) * E;
    std::fill(g_factor.begin(), g_factor.end(), std::array<double, 2>{0.0, 0.0});
    if (soft) {
      std::fill(g_q.begin(), g_q.end(), Quaternary{0.0, 0.0, 0.0, 0.0});
      out.loss += soft_syndrome_term(g, st.belief, error, spec.logicals, soft_scale, g_q);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto& lb = st.log_belief[i];
      const auto& qi = st.belief[i];
      // dL/dB_i(P) from the loss term of this iteration.
      Quaternary gb;
      if (soft) {
        const double mean = qi[0] * g_q[i][0] + qi[1] * g_q[i][1] + qi[2] * g_q[i][2] + qi[3] * g_q[i][3];
        for (int k = 0; k < 4; ++k) gb[k] = qi[k] * (g_q[i][k] - mean);
      } else {
        const int truth = static_cast<int>(error[i]);
        out.loss += (log_sum_exp(lb) - lb[truth]) * scale;
        for (int k = 0; k < 4; ++k) gb[k] = (qi[k] - (k == truth ? 1.0 : 0.0)) * scale;
      }

      // Sum of the extrinsic adjoints of iteration t + 1 at this qubit.
      Quaternary g_all{0.0, 0.0, 0.0, 0.0};
      const bool has_next = t + 1 < T;
      const auto edges = g.qubit_edges(i);
      if (has_next)
        for (std::uint32_t e : edges)
          for (int k = 0; k < 4; ++k) g_all[k] += g_ext_next[e][k];

      for (std::uint32_t e : edges) {
        const auto& a = st.log_factor[e];
        for (Pauli p : kAllPaulis) {
          const int k = static_cast<int>(p);
          const int c = g.anticommutes(e, p);
          double up = gb[k];
          if (has_next) up += g_all[k] - g_ext_next[e][k];
          gw[e] += up * a[c];
          g_factor[e][c] += w[e] * up;
        }
      }
    }

    for (std::size_t e = 0; e < E; ++e) {
      const double delta = st.check_to_var[e];
      g_delta[e] = st.delta_clamped[e] ? 0.0 : g_factor[e][0] / (1.0 + delta) - g_factor[e][1] / (1.0 - delta);
    }

    std::fill(g_d.begin(), g_d.end(), 0.0);
    for (std::size_t j = 0; j < g.num_checks(); ++j) {
      const std::size_t b = g.check_begin(j), end = g.check_end(j);
      const double sign = s[j] ? -1.0 : 1.0;
      for (std::size_t e = b; e < end; ++e) {
        if (g_delta[e] == 0.0) continue;
        for (std::size_t o = b; o < end; ++o) {
          if (o == e) continue;
          double prod = sign;
          for (std::size_t k = b; k < end; ++k)
            if (k != e && k != o) prod *= st.var_to_check[k];
          g_d[o] += g_delta[e] * prod;
        }
      }
    }

    if (t == 0) break;  // first-iteration extrinsics are the prior: no weights upstream
    for (std::size_t e = 0; e < E; ++e) {
      const auto& q = st.var_dist[e];
      const double d = st.var_to_check[e];
      for (Pauli p : kAllPaulis) {
        const int k = static_cast<int>(p);
        const double sigma = g.anticommutes(e, p) ? -1.0 : 1.0;
        g_ext[e][k] = g_d[e] * q[k] * (sigma - d);
      }
    }
    std::swap(g_ext, g_ext_next);
  }

  for (double v : out.grad)
    if (!std::isfinite(v)) throw InvariantViolation("gradient: non-finite value");
  if (!std::isfinite(out.loss)) throw InvariantViolation("gradient: non-finite loss");
  return out;
}

std::vector<double> gradient(const ToricCode& code, const Syndrome& s, const Quaternary& prior, const BpConfig& cfg,
                             const WeightSet& ws, const PauliVector& error, double* loss_out, LossKind kind) {
  const TannerGraph g(code.matrix(ws.matrix));
  const EdgeWeights bound = bind(ws, code);
  auto lg = loss_and_gradient(g, s, prior, cfg, bound, error, LossSpec{kind, code.logicals});
  if (loss_out) *loss_out = lg.loss;
  return reduce_to_set(ws, code, lg.grad, bound.layers());
}

std::string to_json(const TrainConfig& cfg) {
  nlohmann::json j;
  j["kind"] = to_string(cfg.kind);
  j["matrix"] = to_string(cfg.matrix);
  j["iterations"] = cfg.iterations;
  j["batch_size"] = cfg.batch_size;
  j["steps"] = cfg.steps;
  j["learning_rate"] = cfg.learning_rate;
  j["epsilons"] = cfg.epsilons;
  j["grad_clip"] = cfg.grad_clip;
  j["seed"] = cfg.seed;
  j["share_iterations"] = cfg.share_iterations;
  j["optimizer"] = cfg.optimizer;
  j["loss"] = cfg.loss;
  return j.dump();
}

std::pair<WeightSet, LossReport> train(const ToricCode& code, const TrainConfig& cfg) {
  cfg.validate();
  WeightSet ws = init_unit(cfg.kind, cfg.iterations, code, cfg.matrix);
  ws.trained_epsilon = cfg.epsilons.front();
  LossReport report;
  report.config_echo = to_json(cfg);

  const SparseCheckMatrix& h = code.matrix(cfg.matrix);
  const TannerGraph graph(h);
  const std::size_t E = graph.num_edges();
  const std::size_t P = ws.values.size();
  std::vector<std::uint8_t> classes;
  if (cfg.kind == WeightKind::Conv) classes = build_edge_classes(code, cfg.matrix).class_of_edge;

  const LossSpec loss_spec{loss_kind_from_string(cfg.loss), code.logicals};
  BpConfig bp;
  bp.max_iterations = cfg.iterations;
  bp.early_stop = false;

  std::vector<double> m(P, 0.0), v(P, 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
  const int workers = std::min(cfg.workers, cfg.batch_size);

  std::vector<std::vector<double>> sample_grad(cfg.batch_size);
  std::vector<double> sample_loss(cfg.batch_size);

  for (int step = 0; step < cfg.steps; ++step) {
    // Expand the current set to per-edge weights.
    std::vector<double> per_edge(static_cast<std::size_t>(cfg.iterations) * E);
    for (int t = 0; t < cfg.iterations; ++t)
      for (std::size_t e = 0; e < E; ++e)
        per_edge[t * E + e] = cfg.kind == WeightKind::Conv ? ws.values[t * kNumEdgeClasses + classes[e]] : ws.values[t * E + e];
    const EdgeWeights bound(cfg.iterations, E, std::move(per_edge));

    auto run_sample = [&](int b) {
      const std::uint64_t index = static_cast<std::uint64_t>(step) * cfg.batch_size + b;
      auto rng = shot_rng({cfg.seed, index});
      double eps = cfg.epsilons.front();
      if (cfg.epsilons.size() > 1)
        eps = cfg.epsilons[std::min(cfg.epsilons.size() - 1, static_cast<std::size_t>(uniform01(rng) * cfg.epsilons.size()))];
      const DepolarizingChannel channel(eps);
      const PauliVector error = sample_error(channel, h.num_qubits(), rng);
      const Syndrome s = syndrome(h, error);
      auto lg = loss_and_gradient(graph, s, channel.prior(), bp, bound, error, loss_spec);
      sample_loss[b] = lg.loss;
      if (cfg.kind == WeightKind::Dense) {
        sample_grad[b] = std::move(lg.grad);
      } else {
        auto& out = sample_grad[b];
        out.assign(P, 0.0);
        for (int t = 0; t < cfg.iterations; ++t)
          for (std::size_t e = 0; e < E; ++e) out[t * kNumEdgeClasses + classes[e]] += lg.grad[t * E + e];
      }
    };

    if (workers <= 1) {
      for (int b = 0; b < cfg.batch_size; ++b) run_sample(b);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (int b = w; b < cfg.batch_size; b += workers) run_sample(b);
        });
      for (auto& th : pool) th.join();
    }

    // Fixed-order reduction keeps the result independent of the worker count.
    std::vector<double> grad(P, 0.0);
    double batch_loss = 0.0;
    for (int b = 0; b < cfg.batch_size; ++b) {
      batch_loss += sample_loss[b];
      for (std::size_t k = 0; k < P; ++k) grad[k] += sample_grad[b][k];
    }
    batch_loss /= cfg.batch_size;
    for (auto& gk : grad) gk /= cfg.batch_size;
    report.losses.push_back(batch_loss);
    if (!std::isfinite(batch_loss)) {
      report.final_checksum = weight_checksum(ws);
      throw TrainingDiverged("training diverged at step " + std::to_string(step), report);
    }

    if (cfg.share_iterations) {
      const std::size_t per = P / cfg.iterations;
      for (std::size_t k = 0; k < per; ++k) {
        double sum = 0.0;
        for (int t = 0; t < cfg.iterations; ++t) sum += grad[t * per + k];
        for (int t = 0; t < cfg.iterations; ++t) grad[t * per + k] = sum;
      }
    }

    double norm = 0.0;
    for (double gk : grad) norm += gk * gk;
    norm = std::sqrt(norm);
    if (norm > cfg.grad_clip)
      for (auto& gk : grad) gk *= cfg.grad_clip / norm;

    const double bc1 = 1.0 - std::pow(kBeta1, step + 1);
    const double bc2 = 1.0 - std::pow(kBeta2, step + 1);
    for (std::size_t k = 0; k < P; ++k) {
      m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * grad[k];
      v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * grad[k] * grad[k];
      ws.values[k] -= cfg.learning_rate * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + kAdamEps);
    }
    for (double x : ws.values) {
      if (!std::isfinite(x)) {
        report.final_checksum = weight_checksum(ws);
        throw TrainingDiverged("training produced a non-finite weight at step " + std::to_string(step), report);
      }
    }
  }
  report.final_checksum = weight_checksum(ws);
  return {std::move(ws), std::move(report)};
}

}  // namespace toricnbm
