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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toricnbm/bp.hpp"
#include "toricnbm/toric_code.hpp"

namespace toricnbm {

enum class WeightKind { Dense, Conv };

std::string to_string(WeightKind k);
WeightKind weight_kind_from_string(const std::string& s);

inline constexpr int kWeightFormatVersion = 1;

/// Trainable message weights.
///
/// Dense: one value per (iteration, Tanner edge) of the bound matrix, so the
/// set only fits the distance it was created for. Conv: one value per
/// (iteration, edge class), independent of d; binding expands it by class.
struct WeightSet {
  WeightKind kind = WeightKind::Conv;
  int iterations = 0;
  std::vector<double> values;  // iteration-major

  // metadata
  int distance = 0;  // Dense: the bound distance. Conv: the training distance.
  MatrixKind matrix = MatrixKind::Overcomplete;
  double trained_epsilon = 0.0;
  int format_version = kWeightFormatVersion;
  std::string class_convention = edge_class_convention_hash();
  std::optional<int> transferred_from;  // set on dense sets produced by transfer()

  std::size_t values_per_iteration() const { return values.size() / static_cast<std::size_t>(iterations); }
  friend bool operator==(const WeightSet&, const WeightSet&) = default;
};

WeightSet init_unit(WeightKind kind, int iterations, const ToricCode& code, MatrixKind matrix);

/// Expands the set to per-edge weights of `code.matrix(ws.matrix)`.
EdgeWeights bind(const WeightSet& ws, const ToricCode& code);

/// Binds a Conv set to another distance and returns it as a Dense set.
/// Dense input is rejected: per-edge weights have no meaning on another lattice.
WeightSet transfer(const WeightSet& ws, const ToricCode& target);

/// Sums per-edge quantities (e.g. gradients) into the set's own layout.
std::vector<double> reduce_to_set(const WeightSet& ws, const ToricCode& code, std::span<const double> per_edge,
                                  int layers);

/// Mean over iterations and qubits of -log Q_i^{(t)}(e_i); entries are floored at 1e-12.
double loss(std::span<const std::vector<Quaternary>> marginals_per_iteration, const PauliVector& error);

class WeightFileError : public std::runtime_error {
 public:
  enum class Reason { Integrity, Version, Convention, Schema };
  WeightFileError(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// FNV-1a over the metadata and the bit patterns of all values.
std::string weight_checksum(const WeightSet& ws);

std::string to_json(const WeightSet& ws);
WeightSet weights_from_json(const std::string& text);
void save_weights(const WeightSet& ws, const std::filesystem::path& path);
WeightSet load_weights(const std::filesystem::path& path);

}  // namespace toricnbm
