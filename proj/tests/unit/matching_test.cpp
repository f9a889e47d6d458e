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

#include "toricnbm/matching.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace toricnbm {
namespace {

std::vector<double> random_probs(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.001, 0.45);
  std::vector<double> p(n);
  for (auto& v : p) v = u(rng);
  return p;
}

TEST(Matching, SectorProbabilities) {
  const std::vector<Quaternary> q{{0.7, 0.1, 0.15, 0.05}, {1.0, 0.0, 0.0, 0.0}};
  const auto v = posterior_sector_probs(q, Sector::Vertex);
  const auto p = posterior_sector_probs(q, Sector::Plaquette);
  EXPECT_DOUBLE_EQ(v[0], 0.2);
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  EXPECT_DOUBLE_EQ(v[1], kMinSectorProb);
}

TEST(Matching, WeightsAreCappedPositive) {
  const ToricCode code = build_toric(3);
  const auto geo = build_detection_geometry(code);
  std::vector<double> p(code.num_qubits, 0.1);
  p[0] = 0.7;
  p[1] = 0.5;
  const auto g = weight_detection_graph(geo.vertex, p);
  EXPECT_EQ(g.capped_edges, 2u);
  for (double w : g.edge_weight) EXPECT_GT(w, 0.0);
  EXPECT_NEAR(g.edge_weight[2], std::log(9.0), 1e-12);
}

TEST(Matching, DistancesAgreeWithBellmanFord) {
  std::mt19937_64 rng(17);
  for (int d : {3, 5, 6}) {
    const ToricCode code = build_toric(d);
    const auto geo = build_detection_geometry(code);
    for (Sector sector : {Sector::Vertex, Sector::Plaquette}) {
      const auto& sg = geo.sector(sector);
      const auto g = weight_detection_graph(sg, random_probs(rng, code.num_qubits));
      std::vector<int> defects;
      for (int v = 0; v < sg.num_nodes; v += 3) defects.push_back(v);
      const DefectDistances dd(g, defects);
      for (std::size_t a = 0; a < defects.size(); ++a) {
        const auto bf = oracle::bellman_ford(sg.num_nodes, sg.qubit_endpoints, g.edge_weight, defects[a]);
        for (std::size_t b = 0; b < defects.size(); ++b) {
          EXPECT_NEAR(dd.table()(a, b), bf[defects[b]], 1e-9);
          if (a == b) continue;
          // The recovered path is a walk from a to b of exactly that length.
          const auto path = dd.path(static_cast<int>(a), static_cast<int>(b));
          double len = 0;
          std::vector<int> degree(sg.num_nodes, 0);
          for (int q : path) {
            len += g.edge_weight[q];
            ++degree[sg.qubit_endpoints[q][0]];
            ++degree[sg.qubit_endpoints[q][1]];
          }
          EXPECT_NEAR(len, bf[defects[b]], 1e-9);
          for (int v = 0; v < sg.num_nodes; ++v) {
            const bool end = v == defects[a] || v == defects[b];
            EXPECT_EQ(degree[v] % 2, end ? 1 : 0);
          }
        }
      }
    }
  }
}

TEST(Matching, UniformWeightsGiveHopCounts) {
  const ToricCode code = build_toric(7);
  const auto geo = build_detection_geometry(code);
  const auto g = weight_detection_graph(geo.plaquette, std::vector<double>(code.num_qubits, 0.1));
  const std::vector<int> defects{0, 10, 24, 48};
  const DefectDistances dd(g, defects);
  const double unit = std::log(9.0);
  for (std::size_t a = 0; a < defects.size(); ++a) {
    const auto hops = oracle::bfs_hops(geo.plaquette.num_nodes, geo.plaquette.qubit_endpoints, defects[a]);
    for (std::size_t b = 0; b < defects.size(); ++b) EXPECT_NEAR(dd.table()(a, b), hops[defects[b]] * unit, 1e-9);
  }
}

TEST(Matching, OutputsReproduceTheSyndrome) {
  std::mt19937_64 rng(3);
  for (int d : {3, 4, 6}) {
    const ToricCode code = build_toric(d);
    const MatchingDecoder dec(code);
    for (std::uint64_t shot = 0; shot < 200; ++shot) {
      const auto e = sample_error(DepolarizingChannel(0.15), code.num_qubits, ShotSeed{d * 1000ULL, shot});
      const auto s = syndrome(code.standard, e);
      std::vector<Quaternary> marg(code.num_qubits);
      const auto probs = random_probs(rng, code.num_qubits);
      for (std::size_t i = 0; i < code.num_qubits; ++i) marg[i] = {1 - probs[i], probs[i] / 3, probs[i] / 3, probs[i] / 3};
      MatchingStats st;
      EXPECT_EQ(syndrome(code.standard, dec.belief_match(s, marg, &st)), s);
      EXPECT_EQ(st.vertex_defects, sector_defects(code, s, Sector::Vertex).size());
      EXPECT_EQ(syndrome(code.standard, dec.mwpm_baseline(s, 0.1)), s);
    }
  }
}

TEST(Matching, BaselineCorrectsShortChains) {
  const ToricCode code = build_toric(5);
  const MatchingDecoder dec(code);
  for (std::size_t q = 0; q < code.num_qubits; ++q) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      PauliVector e(code.num_qubits);
      e.set(q, p);
      e.set((q + 1) % code.num_qubits, p);
      const auto c = dec.mwpm_baseline(syndrome(code.standard, e), 0.05);
      const auto residual = e * c;
      for (const auto& l : code.logicals) EXPECT_EQ(symplectic_product(residual, l), 0);
    }
  }
}

TEST(Matching, EmptySyndromeGivesIdentity) {
  const ToricCode code = build_toric(4);
  const MatchingDecoder dec(code);
  EXPECT_TRUE(dec.mwpm_baseline(Syndrome(code.standard.num_rows(), 0), 0.1).is_identity());
}

}  // namespace
}  // namespace toricnbm
