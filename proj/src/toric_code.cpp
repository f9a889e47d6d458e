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

#include "toricnbm/toric_code.hpp"

#include <algorithm>
#include <sstream>

#include "toricnbm/errors.hpp"

namespace toricnbm {
namespace {

using O = Orientation;

int wrap(int v, int d) { return ((v % d) + d) % d; }

bool is_vertex_family(CheckFamily f) {
  return f == CheckFamily::Vertex4 || f == CheckFamily::VertexPairH || f == CheckFamily::VertexPairV;
}

// Each pair family is the product of the anchor check with this neighbour.
std::pair<int, int> pair_neighbour(CheckFamily f) {
  switch (f) {
    case CheckFamily::VertexPairH:
    case CheckFamily::PlaquettePairH: return {0, 1};
    case CheckFamily::VertexPairV:
    case CheckFamily::PlaquettePairV: return {1, 0};
    default: return {0, 0};
  }
}

std::vector<std::uint8_t> row_family_weights() { return {4, 4, 6, 6, 6, 6}; }

}  // namespace

std::string to_string(MatrixKind k) { return k == MatrixKind::Standard ? "standard" : "overcomplete"; }

MatrixKind matrix_kind_from_string(const std::string& s) {
  if (s == "standard" || s == "std") return MatrixKind::Standard;
  if (s == "overcomplete" || s == "oc") return MatrixKind::Overcomplete;
  throw ConfigError("unknown matrix kind '" + s + "'");
}

const std::vector<SlotOffset>& family_slots(CheckFamily family) {
  // Weight-4 order is E, W, N, S (vertex) and N, S, W, E (plaquette); pair
  // families list the anchor's remaining edges, then the neighbour's.
  static const std::array<std::vector<SlotOffset>, kNumCheckFamilies> kSlots = {{
      {{O::Horizontal, 0, 0}, {O::Horizontal, 0, -1}, {O::Vertical, -1, 0}, {O::Vertical, 0, 0}},
      {{O::Horizontal, 0, 0}, {O::Horizontal, 1, 0}, {O::Vertical, 0, 0}, {O::Vertical, 0, 1}},
      {{O::Horizontal, 0, -1}, {O::Vertical, -1, 0}, {O::Vertical, 0, 0},
       {O::Horizontal, 0, 1}, {O::Vertical, -1, 1}, {O::Vertical, 0, 1}},
      {{O::Horizontal, 0, 0}, {O::Horizontal, 0, -1}, {O::Vertical, -1, 0},
       {O::Horizontal, 1, 0}, {O::Horizontal, 1, -1}, {O::Vertical, 1, 0}},
      {{O::Horizontal, 0, 0}, {O::Horizontal, 1, 0}, {O::Vertical, 0, 0},
       {O::Horizontal, 0, 1}, {O::Horizontal, 1, 1}, {O::Vertical, 0, 2}},
      {{O::Horizontal, 0, 0}, {O::Vertical, 0, 0}, {O::Vertical, 0, 1},
       {O::Horizontal, 2, 0}, {O::Vertical, 1, 0}, {O::Vertical, 1, 1}},
  }};
  return kSlots[static_cast<int>(family)];
}

int family_class_base(CheckFamily family) {
  static constexpr int kBase[kNumCheckFamilies] = {0, 4, 8, 14, 20, 26};
  return kBase[static_cast<int>(family)];
}

std::string edge_class_convention_hash() {
  std::ostringstream desc;
  desc << "toric-edge-classes-v1;qubit=o*d2+r*d+c;";
  for (int f = 0; f < kNumCheckFamilies; ++f) {
    desc << 'f' << f << '@' << family_class_base(static_cast<CheckFamily>(f)) << ':';
    for (const auto& s : family_slots(static_cast<CheckFamily>(f)))
      desc << static_cast<int>(s.orientation) << ',' << s.dr << ',' << s.dc << ';';
  }
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : desc.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

std::size_t ToricCode::qubit_index(Orientation o, int row, int col) const {
  const int d = distance;
  return static_cast<std::size_t>(o) * sites() + static_cast<std::size_t>(wrap(row, d) * d + wrap(col, d));
}

QubitCoord ToricCode::qubit_coord(std::size_t qubit) const {
  const int d = distance;
  const auto o = static_cast<Orientation>(qubit / sites());
  const int site = static_cast<int>(qubit % sites());
  return {o, site / d, site % d};
}

std::size_t ToricCode::check_index(CheckFamily family, int row, int col) const {
  const int d = distance;
  return static_cast<std::size_t>(family) * sites() + static_cast<std::size_t>(wrap(row, d) * d + wrap(col, d));
}

CheckCoord ToricCode::check_coord(std::size_t check_row) const {
  const int d = distance;
  const auto f = static_cast<CheckFamily>(check_row / sites());
  const int site = static_cast<int>(check_row % sites());
  return {f, site / d, site % d};
}

std::size_t ToricCode::translate_qubit(std::size_t qubit, int dr, int dc) const {
  auto c = qubit_coord(qubit);
  return qubit_index(c.orientation, c.row + dr, c.col + dc);
}

std::size_t ToricCode::translate_check(std::size_t check_row, int dr, int dc) const {
  auto c = check_coord(check_row);
  return check_index(c.family, c.row + dr, c.col + dc);
}

ToricCode build_toric(int d) {
  if (d < 2) throw ConfigError("build_toric: d must be >= 2, got " + std::to_string(d));
  ToricCode code;
  code.distance = d;
  code.num_qubits = 2 * code.sites();
  const std::size_t n = code.num_qubits;

  auto weight4 = [&](CheckFamily f, int r, int c) {
    PauliVector v(n);
    const Pauli p = is_vertex_family(f) ? Pauli::X : Pauli::Z;
    for (const auto& s : family_slots(f)) v.apply(code.qubit_index(s.orientation, r + s.dr, c + s.dc), p);
    return v;
  };
  auto to_entries = [](const PauliVector& v) {
    std::vector<CheckEntry> row;
    for (std::size_t q = 0; q < v.size(); ++q)
      if (v[q] != Pauli::I) row.push_back({static_cast<std::uint32_t>(q), v[q]});
    return row;
  };

  std::vector<std::vector<CheckEntry>> rows;
  rows.reserve(6 * code.sites());
  for (int f = 0; f < kNumCheckFamilies; ++f) {
    const auto family = static_cast<CheckFamily>(f);
    const CheckFamily base = is_vertex_family(family) ? CheckFamily::Vertex4 : CheckFamily::Plaquette4;
    const auto [nr, nc] = pair_neighbour(family);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        PauliVector v = weight4(base, r, c);
        if (family != base) v *= weight4(base, r + nr, c + nc);
        rows.push_back(to_entries(v));
      }
    }
  }
  std::vector<std::vector<CheckEntry>> std_rows(rows.begin(), rows.begin() + 2 * code.sites());
  code.standard = SparseCheckMatrix(n, std::move(std_rows));
  code.overcomplete = SparseCheckMatrix(n, std::move(rows));

  PauliVector x1(n), x2(n), z1(n), z2(n);
  for (int k = 0; k < d; ++k) {
    x1.set(code.qubit_index(O::Vertical, 0, k), Pauli::X);
    x2.set(code.qubit_index(O::Horizontal, k, 0), Pauli::X);
    z1.set(code.qubit_index(O::Vertical, k, 0), Pauli::Z);
    z2.set(code.qubit_index(O::Horizontal, 0, k), Pauli::Z);
  }
  code.logicals = {x1, x2, z1, z2};
  return code;
}

EdgeClassMap build_edge_classes(const ToricCode& code, MatrixKind kind) {
  if (code.distance < 3) throw ConfigError("edge classes require d >= 3");
  const auto& h = code.matrix(kind);
  EdgeClassMap map;
  map.matrix = kind;
  map.class_of_edge.resize(h.num_edges());
  for (std::size_t j = 0; j < h.num_rows(); ++j) {
    const auto cc = code.check_coord(j);
    const auto& slots = family_slots(cc.family);
    const auto row = h.row(j);
    for (std::size_t k = 0; k < row.size(); ++k) {
      int slot = -1;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (code.qubit_index(slots[s].orientation, cc.row + slots[s].dr, cc.col + slots[s].dc) == row[k].qubit) {
          slot = static_cast<int>(s);
          break;
        }
      }
      if (slot < 0) throw InvariantViolation("edge classes: row " + std::to_string(j) + " does not match its family layout");
      map.class_of_edge[h.row_offset(j) + k] = static_cast<std::uint8_t>(family_class_base(cc.family) + slot);
    }
  }
  return map;
}

DetectionGeometry build_detection_geometry(const ToricCode& code) {
  DetectionGeometry geo;
  const auto& h = code.standard;
  const std::size_t sites = code.sites();
  for (int s = 0; s < 2; ++s) {
    SectorGraph& g = s == 0 ? geo.vertex : geo.plaquette;
    g.num_nodes = static_cast<int>(sites);
    g.qubit_endpoints.assign(code.num_qubits, {-1, -1});
    g.adjacency.assign(sites, {});
    for (std::size_t node = 0; node < sites; ++node) {
      for (const auto& e : h.row(s * sites + node)) {
        auto& ends = g.qubit_endpoints[e.qubit];
        if (ends[0] < 0) ends[0] = static_cast<int>(node);
        else ends[1] = static_cast<int>(node);
      }
    }
    for (std::size_t q = 0; q < code.num_qubits; ++q) {
      auto& ends = g.qubit_endpoints[q];
      if (ends[0] < 0 || ends[1] < 0) throw InvariantViolation("detection geometry: qubit not on two checks");
      if (ends[0] > ends[1]) std::swap(ends[0], ends[1]);
      g.adjacency[ends[0]].push_back({ends[1], static_cast<int>(q)});
      g.adjacency[ends[1]].push_back({ends[0], static_cast<int>(q)});
    }
    for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  }
  return geo;
}

ValidationReport validate(const ToricCode& code) {
  auto fail = [](std::string msg) { return ValidationReport{false, std::move(msg)}; };
  const int d = code.distance;
  const std::size_t sites = code.sites();
  const std::size_t n = code.num_qubits;
  if (d < 2 || n != 2 * sites) return fail("dimensions: n != 2d^2");
  if (code.standard.num_rows() != 2 * sites || code.standard.num_qubits() != n)
    return fail("dimensions: standard matrix is not 2d^2 x n");
  if (code.overcomplete.num_rows() != 3 * n || code.overcomplete.num_qubits() != n)
    return fail("dimensions: overcomplete matrix is not 3n x n");

  const auto weights = row_family_weights();
  for (std::size_t j = 0; j < code.overcomplete.num_rows(); ++j) {
    const auto row = code.overcomplete.row(j);
    const auto family = code.check_coord(j).family;
    const std::size_t want = weights[static_cast<int>(family)];
    if (row.size() != want)
      return fail("row-weight: row " + std::to_string(j) + " has weight " + std::to_string(row.size()) +
                  ", expected " + std::to_string(want));
    const Pauli type = is_vertex_family(family) ? Pauli::X : Pauli::Z;
    for (const auto& e : row)
      if (e.pauli != type) return fail("check-type: row " + std::to_string(j) + " mixes Pauli types");
    if (j < 2 * sites && !(code.standard.row(j).size() == row.size() &&
                           std::equal(row.begin(), row.end(), code.standard.row(j).begin())))
      return fail("prefix: standard row " + std::to_string(j) + " differs from overcomplete row");
  }

  for (std::size_t j = 0; j < code.overcomplete.num_rows(); ++j) {
    if (!commutes_with_all(code.overcomplete.row_as_vector(j), code.overcomplete))
      return fail("stabilizer commutation: row " + std::to_string(j));
  }

  static constexpr const char* kNames[4] = {"X1", "X2", "Z1", "Z2"};
  for (int a = 0; a < 4; ++a) {
    if (code.logicals[a].size() != n) return fail(std::string("dimensions: logical ") + kNames[a]);
    if (!commutes_with_all(code.logicals[a], code.overcomplete))
      return fail(std::string("logical-stabilizer commutation: ") + kNames[a]);
  }

  const std::size_t rank_std = symplectic_rank(code.standard);
  if (rank_std != n - 2)
    return fail("rank: standard matrix has symplectic rank " + std::to_string(rank_std) + ", expected " +
                std::to_string(n - 2));
  if (symplectic_rank(code.overcomplete) != rank_std) return fail("rank: weight-6 rows leave the stabilizer group");

  for (int a = 0; a < 4; ++a) {
    if (code.logicals[a].weight() != static_cast<std::size_t>(d))
      return fail(std::string("logical weight: ") + kNames[a] + " has weight " +
                  std::to_string(code.logicals[a].weight()));
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const int want = (a < 2 && b == a + 2) ? 1 : 0;
      if (symplectic_product(code.logicals[a], code.logicals[b]) != want)
        return fail(std::string("logical pairing: ") + kNames[a] + "/" + kNames[b]);
    }
  }
  std::vector<PauliVector> all;
  for (std::size_t j = 0; j < code.standard.num_rows(); ++j) all.push_back(code.standard.row_as_vector(j));
  all.insert(all.end(), code.logicals.begin(), code.logicals.end());
  if (symplectic_rank(all) != n + 2) return fail("logical independence: logicals not independent of stabilizers");
  return {};
}

}  // namespace toricnbm
