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

#include <cstddef>
#include <utility>
#include <vector>

namespace toricnbm {

struct WeightedEdge {
  int u;
  int v;
  double weight;
};

/// Maximum-weight matching by Edmonds' primal-dual blossom algorithm, O(V^3).
/// With `max_cardinality` the result is a maximum-weight matching among the
/// maximum-cardinality ones. Returns mate[v] (-1 when unmatched).
std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges, bool max_cardinality);

/// Symmetric k x k table of pair costs, row-major.
class DistanceTable {
 public:
  explicit DistanceTable(std::size_t k) : k_(k), d_(k * k, 0.0) {}
  std::size_t size() const { return k_; }
  double operator()(std::size_t a, std::size_t b) const { return d_[a * k_ + b]; }
  void set(std::size_t a, std::size_t b, double w) { d_[a * k_ + b] = d_[b * k_ + a] = w; }

 private:
  std::size_t k_;
  std::vector<double> d_;
};

struct PairMatching {
  std::vector<std::pair<int, int>> pairs;  // a < b, sorted
  double total_weight = 0.0;
};

/// Exact minimum-weight perfect matching of the complete graph on k nodes.
/// Throws InvariantViolation for odd k.
PairMatching mwpm(const DistanceTable& table);

}  // namespace toricnbm
