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

#include <span>
#include <utility>
#include <vector>

#include "toricnbm/blossom.hpp"
#include "toricnbm/noise.hpp"
#include "toricnbm/pauli.hpp"
#include "toricnbm/toric_code.hpp"

namespace toricnbm {

inline constexpr double kMinSectorProb = 1e-12;
/// Matching needs nonnegative edge weights, so flip probabilities are capped
/// just below 1/2 when the graph is weighted.
inline constexpr double kMaxMatchingProb = 0.5 - 1e-6;

/// Probability that qubit i flips the checks of `sector`: Z or Y mass for the
/// vertex sector, X or Y mass for the plaquette sector. Clamped to
/// [p_min, 1 - p_min].
std::vector<double> posterior_sector_probs(std::span<const Quaternary> marginals, Sector sector,
                                           double p_min = kMinSectorProb);

struct WeightedDetectionGraph {
  const SectorGraph* geometry = nullptr;
  std::vector<double> edge_weight;  // per qubit, log((1 - p) / p)
  std::size_t capped_edges = 0;     // edges whose p exceeded kMaxMatchingProb
};

WeightedDetectionGraph weight_detection_graph(const SectorGraph& geometry, std::span<const double> flip_probs);

/// Unsatisfied weight-4 checks of one sector, as node ids of its graph.
std::vector<int> sector_defects(const ToricCode& code, const Syndrome& standard_syndrome, Sector sector);

/// Shortest paths between every pair of defects.
class DefectDistances {
 public:
  DefectDistances(const WeightedDetectionGraph& g, std::vector<int> defects);

  const DistanceTable& table() const { return table_; }
  const std::vector<int>& defects() const { return defects_; }
  /// Qubits along the lexicographically smallest (by node sequence) shortest
  /// path from defect a to defect b.
  std::vector<int> path(int a, int b) const;

 private:
  const WeightedDetectionGraph* graph_;
  std::vector<int> defects_;
  std::vector<std::vector<double>> dist_;  // per defect, to every node
  DistanceTable table_;
};

struct SectorMatching {
  std::vector<std::pair<int, int>> pairs;  // node ids
  std::vector<std::vector<int>> paths;     // qubits per pair
  double total_weight = 0.0;
};

SectorMatching match_sector(const WeightedDetectionGraph& g, const std::vector<int>& defects);

/// Z on the vertex-sector paths, X on the plaquette-sector paths.
PauliVector assemble_correction(const SectorMatching& vertex, const SectorMatching& plaquette,
                                std::size_t num_qubits);

struct MatchingStats {
  std::size_t vertex_defects = 0;
  std::size_t plaquette_defects = 0;
  std::size_t capped_edges = 0;
};

/// Second-stage decoder for one code; immutable and shareable across workers.
class MatchingDecoder {
 public:
  explicit MatchingDecoder(const ToricCode& code);

  const DetectionGeometry& geometry() const { return geometry_; }

  /// Matching with edge weights from per-qubit marginals.
  PauliVector belief_match(const Syndrome& standard_syndrome, std::span<const Quaternary> marginals,
                           MatchingStats* stats = nullptr) const;
  /// Standard MWPM: edge weights from the channel prior.
  PauliVector mwpm_baseline(const Syndrome& standard_syndrome, double epsilon, MatchingStats* stats = nullptr) const;

 private:
  const ToricCode* code_;
  DetectionGeometry geometry_;
};

}  // namespace toricnbm
