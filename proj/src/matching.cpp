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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "toricnbm/errors.hpp"

namespace toricnbm {

std::vector<double> posterior_sector_probs(std::span<const Quaternary> marginals, Sector sector, double p_min) {
  const int other = sector == Sector::Vertex ? static_cast<int>(Pauli::Z) : static_cast<int>(Pauli::X);
  std::vector<double> p(marginals.size());
  for (std::size_t i = 0; i < marginals.size(); ++i)
    p[i] = std::clamp(marginals[i][other] + marginals[i][static_cast<int>(Pauli::Y)], p_min, 1.0 - p_min);
  return p;
}

WeightedDetectionGraph weight_detection_graph(const SectorGraph& geometry, std::span<const double> flip_probs) {
  if (flip_probs.size() != geometry.qubit_endpoints.size())
    throw ConfigError("weight_detection_graph: probability count != qubit count");
  WeightedDetectionGraph g;
  g.geometry = &geometry;
  g.edge_weight.resize(flip_probs.size());
  for (std::size_t q = 0; q < flip_probs.size(); ++q) {
    double p = std::clamp(flip_probs[q], kMinSectorProb, 1.0 - kMinSectorProb);
    if (p > kMaxMatchingProb) {
      p = kMaxMatchingProb;
      ++g.capped_edges;
    }
    g.edge_weight[q] = std::log((1.0 - p) / p);
  }
  return g;
}

std::vector<int> sector_defects(const ToricCode& code, const Syndrome& standard_syndrome, Sector sector) {
  const std::size_t sites = code.sites();
  if (standard_syndrome.size() < 2 * sites) throw ConfigError("sector_defects: syndrome shorter than the standard matrix");
  const std::size_t base = sector == Sector::Vertex ? 0 : sites;
  std::vector<int> out;
  for (std::size_t node = 0; node < sites; ++node)
    if (standard_syndrome[base + node]) out.push_back(static_cast<int>(node));
  return out;
}

DefectDistances::DefectDistances(const WeightedDetectionGraph& g, std::vector<int> defects)
    : graph_(&g), defects_(std::move(defects)), table_(defects_.size()) {
  const SectorGraph& geo = *g.geometry;
  const std::size_t k = defects_.size();
  dist_.resize(k);
  using Item = std::pair<double, int>;
  for (std::size_t a = 0; a < k; ++a) {
    auto& dist = dist_[a];
    dist.assign(geo.num_nodes, std::numeric_limits<double>::infinity());
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[defects_[a]] = 0.0;
    pq.push({0.0, defects_[a]});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[u]) continue;
      for (const auto& [v, q] : geo.adjacency[u]) {
        const double nd = du + g.edge_weight[q];
        if (nd < dist[v]) {
          dist[v] = nd;
          pq.push({nd, v});
        }
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) table_.set(a, b, dist_[b][defects_[a]]);
}

std::vector<int> DefectDistances::path(int a, int b) const {
  const SectorGraph& geo = *graph_->geometry;
  const auto& to_b = dist_[b];
  const int target = defects_[b];
  int u = defects_[a];
  std::vector<int> qubits;
  for (int steps = 0; u != target; ++steps) {
    if (steps > geo.num_nodes) throw InvariantViolation("defect path: walk did not reach its target");
    const double tol = 1e-9 * (1.0 + to_b[u]);
    int next = -1, via = -1;
    // Adjacency is sorted by neighbour id, so the first tight edge gives the
    // lexicographically smallest continuation.
    for (const auto& [v, q] : geo.adjacency[u]) {
      if (std::abs(to_b[u] - (graph_->edge_weight[q] + to_b[v])) <= tol && to_b[v] < to_b[u]) {
        next = v;
        via = q;
        break;
      }
    }
    if (next < 0) throw InvariantViolation("defect path: no tight edge on the shortest path");
    qubits.push_back(via);
    u = next;
  }
  return qubits;
}

SectorMatching match_sector(const WeightedDetectionGraph& g, const std::vector<int>& defects) {
  SectorMatching out;
  if (defects.empty()) return out;
  if (defects.size() % 2 != 0)
    throw InvariantViolation("matching: odd defect count " + std::to_string(defects.size()) + " in a sector");
  const DefectDistances dd(g, defects);
  const PairMatching pm = mwpm(dd.table());
  out.total_weight = pm.total_weight;
  for (const auto& [a, b] : pm.pairs) {
    out.pairs.emplace_back(defects[a], defects[b]);
    out.paths.push_back(dd.path(a, b));
  }
  return out;
}

PauliVector assemble_correction(const SectorMatching& vertex, const SectorMatching& plaquette,
                                std::size_t num_qubits) {
  PauliVector c(num_qubits);
  for (const auto& path : vertex.paths)
    for (int q : path) c.apply(q, Pauli::Z);
  for (const auto& path : plaquette.paths)
    for (int q : path) c.apply(q, Pauli::X);
  return c;
}

MatchingDecoder::MatchingDecoder(const ToricCode& code) : code_(&code), geometry_(build_detection_geometry(code)) {}

PauliVector MatchingDecoder::belief_match(const Syndrome& standard_syndrome, std::span<const Quaternary> marginals,
                                          MatchingStats* stats) const {
  if (marginals.size() != code_->num_qubits) throw ConfigError("belief_match: marginal count != qubit count");
  const auto vd = sector_defects(*code_, standard_syndrome, Sector::Vertex);
  const auto pd = sector_defects(*code_, standard_syndrome, Sector::Plaquette);
  SectorMatching vm, pmatch;
  std::size_t capped = 0;
  if (!vd.empty()) {
    const auto g = weight_detection_graph(geometry_.vertex, posterior_sector_probs(marginals, Sector::Vertex));
    capped += g.capped_edges;
    vm = match_sector(g, vd);
  }
  if (!pd.empty()) {
    const auto g = weight_detection_graph(geometry_.plaquette, posterior_sector_probs(marginals, Sector::Plaquette));
    capped += g.capped_edges;
    pmatch = match_sector(g, pd);
  }
  if (stats) *stats = {vd.size(), pd.size(), capped};
  return assemble_correction(vm, pmatch, code_->num_qubits);
}

PauliVector MatchingDecoder::mwpm_baseline(const Syndrome& standard_syndrome, double epsilon,
                                           MatchingStats* stats) const {
  const std::vector<Quaternary> prior(code_->num_qubits, DepolarizingChannel(epsilon).prior());
  return belief_match(standard_syndrome, prior, stats);
}

}  // namespace toricnbm
