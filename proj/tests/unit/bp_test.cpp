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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "toricnbm/noise.hpp"
#include "toricnbm/toric_code.hpp"

namespace toricnbm {
namespace {

TEST(Bp, ExactOnAcyclicGraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const auto h = oracle::random_acyclic_matrix(rng, n, n);
    const double eps = 0.02 + 0.3 * (rng() % 1000) / 1000.0;
    const DepolarizingChannel ch(eps);
    const auto e = sample_error(ch, n, rng);
    const auto s = syndrome(h, e);
    BpConfig cfg;
    cfg.early_stop = false;
    cfg.max_iterations = static_cast<int>(2 * n + 2);
    BpDecoder dec(h);
    const auto r = dec.decode(s, ch.prior(), cfg);
    const auto exact = oracle::brute_force_posteriors(oracle::to_dense(h), n, ch.prior(), s);
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(r.marginals[i][k], exact[i][k], 1e-9) << "trial " << trial;
  }
}

TEST(Bp, CorrectsSingleErrorsOnToricCode) {
  const ToricCode code = build_toric(5);
  BpDecoder dec(code.standard);
  const DepolarizingChannel ch(0.01);
  std::size_t converged = 0;
  for (std::size_t q = 0; q < code.num_qubits; q += 7) {
    for (Pauli p : {Pauli::X, Pauli::Z}) {
      PauliVector e(code.num_qubits);
      e.set(q, p);
      const auto r = dec.decode(syndrome(code.standard, e), ch.prior(), BpConfig{});
      EXPECT_EQ(syndrome(code.standard, r.hard_decision), syndrome(code.standard, e));
      converged += r.converged;
    }
  }
  EXPECT_GT(converged, 0u);
}

TEST(Bp, TrivialSyndromeStopsAfterOneIteration) {
  const ToricCode code = build_toric(4);
  BpDecoder dec(code.overcomplete);
  const auto r = dec.decode(Syndrome(code.overcomplete.num_rows(), 0), DepolarizingChannel(0.1).prior(), BpConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations_used, 1);
  EXPECT_TRUE(r.hard_decision.is_identity());
}

TEST(Bp, UnitWeightsAreBitIdentical) {
  const ToricCode code = build_toric(4);
  const DepolarizingChannel ch(0.1);
  BpDecoder plain(code.overcomplete), weighted(code.overcomplete);
  const auto unit = EdgeWeights::unit(3, code.overcomplete.num_edges());
  for (std::uint64_t shot = 0; shot < 50; ++shot) {
    const auto e = sample_error(ch, code.num_qubits, ShotSeed{5, shot});
    const auto s = syndrome(code.overcomplete, e);
    const auto a = plain.decode(s, ch.prior(), BpConfig{});
    const auto b = weighted.decode(s, ch.prior(), BpConfig{}, &unit);
    ASSERT_EQ(a.converged, b.converged);
    ASSERT_EQ(a.iterations_used, b.iterations_used);
    ASSERT_EQ(a.hard_decision, b.hard_decision);
    for (std::size_t i = 0; i < code.num_qubits; ++i)
      for (int k = 0; k < 4; ++k) ASSERT_EQ(a.marginals[i][k], b.marginals[i][k]);
  }
}

TEST(Bp, LastLayerIsReused) {
  const ToricCode code = build_toric(3);
  const std::size_t m = code.standard.num_edges();
  std::vector<double> two(2 * m, 0.7), four(4 * m, 0.7);
  for (std::size_t e = 0; e < m; ++e) two[e] = four[e] = 1.3;
  const EdgeWeights w2(2, m, two), w4(4, m, four);
  BpConfig cfg;
  cfg.early_stop = false;
  cfg.max_iterations = 4;
  const DepolarizingChannel ch(0.1);
  const auto e = sample_error(ch, code.num_qubits, ShotSeed{8, 1});
  BpDecoder dec(code.standard);
  const auto a = dec.decode(syndrome(code.standard, e), ch.prior(), cfg, &w2);
  const auto b = dec.decode(syndrome(code.standard, e), ch.prior(), cfg, &w4);
  for (std::size_t i = 0; i < code.num_qubits; ++i)
    for (int k = 0; k < 4; ++k) EXPECT_EQ(a.marginals[i][k], b.marginals[i][k]);
}

// Redundant weight-6 rows help once BP is given enough iterations. Paired
// shots, same errors for both matrices.
TEST(Bp, OvercompleteMatrixConvergesMoreOften) {
  const ToricCode code = build_toric(4);
  const DepolarizingChannel ch(0.05);
  BpDecoder std_dec(code.standard), oc_dec(code.overcomplete);
  BpConfig cfg;
  cfg.max_iterations = 100;
  int std_ok = 0, oc_ok = 0;
  const int shots = 4000;
  for (int i = 0; i < shots; ++i) {
    const auto e = sample_error(ch, code.num_qubits, ShotSeed{77, static_cast<std::uint64_t>(i)});
    std_ok += std_dec.decode(syndrome(code.standard, e), ch.prior(), cfg).converged;
    oc_ok += oc_dec.decode(syndrome(code.overcomplete, e), ch.prior(), cfg).converged;
  }
  EXPECT_GT(oc_ok - std_ok, shots / 100);
}

TEST(Bp, HardDecisionTieBreak) {
  MessageState st;
  st.log_belief = {{0.25, 0.25, 0.25, 0.25}, {0.1, 0.3, 0.3, 0.3}, {0.1, 0.2, 0.35, 0.35}, {0.0, 0.0, 0.0, 1.0}};
  EXPECT_EQ(hard_decision(st).to_string(), "IXYZ");
}

TEST(Bp, RejectsMismatchedInputs) {
  const ToricCode code = build_toric(3);
  BpDecoder dec(code.standard);
  const auto prior = DepolarizingChannel(0.1).prior();
  EXPECT_THROW(dec.decode(Syndrome(3, 0), prior, BpConfig{}), std::invalid_argument);
  const auto wrong = EdgeWeights::unit(1, 5);
  EXPECT_THROW(dec.decode(Syndrome(code.standard.num_rows(), 0), prior, BpConfig{}, &wrong), std::invalid_argument);
  EXPECT_THROW(EdgeWeights(1, 2, {1.0, NAN}), std::invalid_argument);
}

}  // namespace
}  // namespace toricnbm
