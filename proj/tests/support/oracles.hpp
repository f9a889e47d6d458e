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

// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code with the library beyond its types.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "toricnbm/noise.hpp"
#include "toricnbm/pauli.hpp"

namespace toricnbm::oracle {

// Dense check matrix as a grid of Paulis.
using DenseMatrix = std::vector<std::vector<Pauli>>;

inline int anticommute(Pauli a, Pauli b) {
  // Table lookup rather than bit algebra: distinct non-identity Paulis anticommute.
  if (a == Pauli::I || b == Pauli::I || a == b) return 0;
  return 1;
}

inline DenseMatrix to_dense(const SparseCheckMatrix& h) {
  DenseMatrix m(h.num_rows(), std::vector<Pauli>(h.num_qubits(), Pauli::I));
  for (std::size_t j = 0; j < h.num_rows(); ++j)
    for (const auto& e : h.row(j)) m[j][e.qubit] = e.pauli;
  return m;
}

inline Syndrome dense_syndrome(const DenseMatrix& m, const std::vector<Pauli>& e) {
  Syndrome s(m.size(), 0);
  for (std::size_t j = 0; j < m.size(); ++j) {
    int parity = 0;
    for (std::size_t i = 0; i < e.size(); ++i) parity += anticommute(m[j][i], e[i]);
    s[j] = static_cast<std::uint8_t>(parity % 2);
  }
  return s;
}

inline std::vector<Pauli> to_paulis(const PauliVector& v) {
  std::vector<Pauli> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

// Exact posterior marginals P(e_i | s) by enumerating all 4^n errors.
inline std::vector<Quaternary> brute_force_posteriors(const DenseMatrix& m, std::size_t n, const Quaternary& prior,
                                                      const Syndrome& s) {
  std::vector<Quaternary> marg(n, Quaternary{0, 0, 0, 0});
  std::vector<Pauli> e(n, Pauli::I);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 4;
  double z = 0.0;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = static_cast<Pauli>(c & 3);
      w *= prior[c & 3];
      c >>= 2;
    }
    if (dense_syndrome(m, e) != s) continue;
    z += w;
    for (std::size_t i = 0; i < n; ++i) marg[i][static_cast<int>(e[i])] += w;
  }
  for (auto& q : marg)
    for (auto& v : q) v /= z;
  return marg;
}

// Random check matrix whose Tanner graph is a forest. Checks are added one at
// a time; a check may touch at most one qubit of each existing component.
inline SparseCheckMatrix random_acyclic_matrix(std::mt19937_64& rng, std::size_t n, std::size_t max_checks) {
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  std::vector<std::vector<CheckEntry>> rows;
  std::uniform_int_distribution<int> pick_pauli(1, 3);
  for (std::size_t attempt = 0; attempt < 4 * max_checks && rows.size() < max_checks; ++attempt) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t want = 1 + rng() % std::min<std::size_t>(n, 4);
    std::vector<std::uint32_t> chosen;
    std::vector<int> roots;
    for (std::uint32_t q : order) {
      if (chosen.size() == want) break;
      const int r = find(static_cast<int>(q));
      if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
      roots.push_back(r);
      chosen.push_back(q);
    }
    if (chosen.empty()) continue;
    for (std::size_t k = 1; k < roots.size(); ++k) comp[find(roots[k])] = find(roots[0]);
    std::vector<CheckEntry> row;
    for (std::uint32_t q : chosen) row.push_back({q, static_cast<Pauli>(pick_pauli(rng))});
    rows.push_back(std::move(row));
  }
  return SparseCheckMatrix(n, std::move(rows));
}

// Minimum-weight perfect pairing by dynamic programming over subsets.
inline double min_pairing_weight(std::size_t k, const std::vector<std::vector<double>>& w) {
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<double> best(full + 1, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (!std::isfinite(best[mask])) continue;
    std::size_t a = 0;
    while (mask >> a & 1) ++a;
    for (std::size_t b = a + 1; b < k; ++b) {
      if (mask >> b & 1) continue;
      const std::size_t next = mask | (std::size_t{1} << a) | (std::size_t{1} << b);
      best[next] = std::min(best[next], best[mask] + w[a][b]);
    }
  }
  return best[full];
}

// Single-source shortest paths by Bellman-Ford on an undirected edge list.
inline std::vector<double> bellman_ford(int num_nodes, const std::vector<std::array<int, 2>>& edges,
                                        const std::vector<double>& weight, int source) {
  std::vector<double> dist(num_nodes, std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  for (int round = 0; round < num_nodes; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [u, v] = edges[e];
      if (dist[u] + weight[e] < dist[v]) dist[v] = dist[u] + weight[e], changed = true;
      if (dist[v] + weight[e] < dist[u]) dist[u] = dist[v] + weight[e], changed = true;
    }
    if (!changed) break;
  }
  return dist;
}

// Hop counts by breadth-first search.
inline std::vector<int> bfs_hops(int num_nodes, const std::vector<std::array<int, 2>>& edges, int source) {
  std::vector<std::vector<int>> adj(num_nodes);
  for (const auto& [u, v] : edges) adj[u].push_back(v), adj[v].push_back(u);
  std::vector<int> hops(num_nodes, -1);
  std::vector<int> queue{source};
  hops[source] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (int v : adj[queue[h]])
      if (hops[v] < 0) hops[v] = hops[queue[h]] + 1, queue.push_back(v);
  return hops;
}

}  // namespace toricnbm::oracle
