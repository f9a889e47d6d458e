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
#include <string>
#include <utility>
#include <vector>

#include "toricnbm/pauli.hpp"

namespace toricnbm {

enum class Orientation : std::uint8_t { Horizontal = 0, Vertical = 1 };

// Check families, in the order their rows appear in the overcomplete matrix.
// The pair families are products of a check with its right (H) or down (V)
// neighbour of the same type.
enum class CheckFamily : std::uint8_t {
  Vertex4 = 0,
  Plaquette4 = 1,
  VertexPairH = 2,
  VertexPairV = 3,
  PlaquettePairH = 4,
  PlaquettePairV = 5,
};
inline constexpr int kNumCheckFamilies = 6;

enum class MatrixKind : std::uint8_t { Standard, Overcomplete };

std::string to_string(MatrixKind k);
MatrixKind matrix_kind_from_string(const std::string& s);

struct QubitCoord {
  Orientation orientation;
  int row;
  int col;
};

struct CheckCoord {
  CheckFamily family;
  int row;
  int col;
};

/// The [[2d^2, 2, d]] toric code on a d x d periodic lattice.
///
/// Qubit id = orientation * d^2 + row * d + col. Horizontal edge (r, c) joins
/// vertices (r, c) and (r, c+1); vertical edge (r, c) joins (r, c) and (r+1, c).
/// Plaquette (r, c) has corner vertices (r, c), (r, c+1), (r+1, c), (r+1, c+1).
/// Row j of either matrix is check family j / d^2 at lattice site j % d^2, so the
/// standard matrix is a prefix of the overcomplete one.
struct ToricCode {
  int distance = 0;
  std::size_t num_qubits = 0;
  SparseCheckMatrix standard;      // 2d^2 weight-4 rows: d^2 vertex (X) then d^2 plaquette (Z)
  SparseCheckMatrix overcomplete;  // standard rows followed by 4d^2 weight-6 rows
  std::array<PauliVector, 4> logicals;  // X1, X2, Z1, Z2; Xa anticommutes with Za only

  const SparseCheckMatrix& matrix(MatrixKind kind) const {
    return kind == MatrixKind::Standard ? standard : overcomplete;
  }
  std::size_t sites() const { return static_cast<std::size_t>(distance) * distance; }

  std::size_t qubit_index(Orientation o, int row, int col) const;
  QubitCoord qubit_coord(std::size_t qubit) const;
  std::size_t check_index(CheckFamily family, int row, int col) const;
  CheckCoord check_coord(std::size_t check_row) const;

  std::size_t translate_qubit(std::size_t qubit, int dr, int dc) const;
  std::size_t translate_check(std::size_t check_row, int dr, int dc) const;
};

/// Builds the toric code. d >= 3 is the supported range; d == 2 builds but the
/// weight-6 products degenerate and validate() rejects the result.
ToricCode build_toric(int d);

/// Lattice offset of one slot in a check's canonical geometric order.
struct SlotOffset {
  Orientation orientation;
  int dr;
  int dc;
};

/// Canonical slot layout of each family, anchored at the check's (row, col).
const std::vector<SlotOffset>& family_slots(CheckFamily family);

/// Translation classes of Tanner edges: 4 + 4 slots for the weight-4
/// families and 6 for each of the four pair families.
inline constexpr int kNumEdgeClasses = 32;

struct EdgeClassMap {
  MatrixKind matrix = MatrixKind::Overcomplete;
  std::vector<std::uint8_t> class_of_edge;  // indexed by Tanner edge of the bound matrix
};

int family_class_base(CheckFamily family);

/// Fingerprint of the slot layout; stored in weight files so that weights
/// trained under one convention are never bound under another.
std::string edge_class_convention_hash();

EdgeClassMap build_edge_classes(const ToricCode& code, MatrixKind kind = MatrixKind::Overcomplete);

enum class Sector : std::uint8_t { Vertex = 0, Plaquette = 1 };

/// Matching graph of one check family. Nodes are weight-4 checks, every qubit
/// is the edge between the two checks of this family it belongs to.
struct SectorGraph {
  int num_nodes = 0;
  std::vector<std::array<int, 2>> qubit_endpoints;                  // per qubit, sorted
  std::vector<std::vector<std::pair<int, int>>> adjacency;          // node -> (neighbour, qubit)
};

struct DetectionGeometry {
  SectorGraph vertex;     // detects Z components (X-type checks)
  SectorGraph plaquette;  // detects X components (Z-type checks)
  const SectorGraph& sector(Sector s) const { return s == Sector::Vertex ? vertex : plaquette; }
};

DetectionGeometry build_detection_geometry(const ToricCode& code);

struct ValidationReport {
  bool ok = true;
  std::string first_violation;
};

/// Checks every structural invariant of the code; stops at the first failure.
ValidationReport validate(const ToricCode& code);

}  // namespace toricnbm
