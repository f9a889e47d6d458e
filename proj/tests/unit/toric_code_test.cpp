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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "oracles.hpp"

namespace toricnbm {
namespace {

TEST(ToricCode, ValidatesForSmallDistances) {
  for (int d = 3; d <= 10; ++d) {
    const ToricCode code = build_toric(d);
    const auto report = validate(code);
    EXPECT_TRUE(report.ok) << "d=" << d << ": " << report.first_violation;
    EXPECT_EQ(code.num_qubits, static_cast<std::size_t>(2 * d * d));
    EXPECT_EQ(code.standard.num_rows(), code.num_qubits);
    EXPECT_EQ(code.overcomplete.num_rows(), 3 * code.num_qubits);
  }
}

TEST(ToricCode, DistanceTwoIsRejectedByValidation) {
  EXPECT_FALSE(validate(build_toric(2)).ok);
  EXPECT_THROW(build_toric(1), std::invalid_argument);
}

TEST(ToricCode, CorruptedMatrixFailsValidation) {
  ToricCode code = build_toric(4);
  auto rows = code.standard.rows();
  rows[0][0].pauli = Pauli::Z;  // vertex check with a Z entry
  code.standard = SparseCheckMatrix(code.num_qubits, rows);
  const auto report = validate(code);
  EXPECT_FALSE(report.ok);
  EXPECT_FALSE(report.first_violation.empty());
}

TEST(ToricCode, IndexingRoundTrips) {
  const ToricCode code = build_toric(5);
  for (std::size_t q = 0; q < code.num_qubits; ++q) {
    const auto c = code.qubit_coord(q);
    EXPECT_EQ(code.qubit_index(c.orientation, c.row, c.col), q);
  }
  for (std::size_t j = 0; j < code.overcomplete.num_rows(); ++j) {
    const auto c = code.check_coord(j);
    EXPECT_EQ(code.check_index(c.family, c.row, c.col), j);
  }
  EXPECT_EQ(code.qubit_index(Orientation::Horizontal, -1, 5), code.qubit_index(Orientation::Horizontal, 4, 0));
}

TEST(ToricCode, WeightSixRowsAreProductsOfNeighbours) {
  const ToricCode code = build_toric(4);
  for (std::size_t j = 2 * code.sites(); j < code.overcomplete.num_rows(); ++j) {
    EXPECT_EQ(code.overcomplete.row(j).size(), 6u);
    const auto v = code.overcomplete.row_as_vector(j);
    EXPECT_TRUE(commutes_with_all(v, code.standard));
    std::vector<PauliVector> rows;
    for (std::size_t k = 0; k < code.standard.num_rows(); ++k) rows.push_back(code.standard.row_as_vector(k));
    const auto base = symplectic_rank(rows);
    rows.push_back(v);
    EXPECT_EQ(symplectic_rank(rows), base);
  }
}

// No nontrivial logical operator of weight below d exists.
TEST(ToricCode, ExhaustiveMinimumDistance) {
  for (int d : {3, 4}) {
    const ToricCode code = build_toric(d);
    const std::size_t n = code.num_qubits;
    PauliVector op(n);
    std::size_t low_weight_logicals = 0;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int left) {
      if (op.weight() > 0 && commutes_with_all(op, code.standard)) {
        for (const auto& l : code.logicals)
          if (symplectic_product(op, l)) ++low_weight_logicals;
      }
      if (left == 0) return;
      for (std::size_t q = start; q < n; ++q)
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
          op.set(q, p);
          rec(q + 1, left - 1);
          op.set(q, Pauli::I);
        }
    };
    rec(0, d - 1);
    EXPECT_EQ(low_weight_logicals, 0u) << "d=" << d;
    for (const auto& l : code.logicals) EXPECT_EQ(l.weight(), static_cast<std::size_t>(d));
  }
}

TEST(ToricCode, EdgeClassesAreTranslationInvariant) {
  for (int d : {3, 4, 6}) {
    const ToricCode code = build_toric(d);
    const auto map = build_edge_classes(code);
    const auto& h = code.overcomplete;
    ASSERT_EQ(map.class_of_edge.size(), h.num_edges());
    std::vector<std::size_t> count(kNumEdgeClasses, 0);
    for (std::size_t j = 0; j < h.num_rows(); ++j) {
      const auto row = h.row(j);
      for (std::size_t k = 0; k < row.size(); ++k) {
        const int cls = map.class_of_edge[h.row_offset(j) + k];
        ++count[cls];
        for (auto [dr, dc] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, d - 1}}) {
          const std::size_t tj = code.translate_check(j, dr, dc);
          const std::uint32_t tq = static_cast<std::uint32_t>(code.translate_qubit(row[k].qubit, dr, dc));
          const auto trow = h.row(tj);
          const auto it = std::find_if(trow.begin(), trow.end(), [&](const CheckEntry& e) { return e.qubit == tq; });
          ASSERT_NE(it, trow.end());
          EXPECT_EQ(it->pauli, row[k].pauli);
          EXPECT_EQ(map.class_of_edge[h.row_offset(tj) + (it - trow.begin())], cls);
        }
      }
    }
    for (int c = 0; c < kNumEdgeClasses; ++c) EXPECT_EQ(count[c], code.sites()) << "class " << c;
  }
  EXPECT_THROW(build_edge_classes(build_toric(2)), std::invalid_argument);
}

TEST(ToricCode, StandardClassMapIsPrefix) {
  const ToricCode code = build_toric(5);
  const auto full = build_edge_classes(code, MatrixKind::Overcomplete);
  const auto std_map = build_edge_classes(code, MatrixKind::Standard);
  ASSERT_EQ(std_map.class_of_edge.size(), code.standard.num_edges());
  EXPECT_TRUE(std::equal(std_map.class_of_edge.begin(), std_map.class_of_edge.end(), full.class_of_edge.begin()));
  std::set<int> used(std_map.class_of_edge.begin(), std_map.class_of_edge.end());
  EXPECT_EQ(used.size(), 8u);
}

TEST(ToricCode, DetectionGeometryMatchesChecks) {
  const ToricCode code = build_toric(4);
  const auto geo = build_detection_geometry(code);
  for (std::size_t q = 0; q < code.num_qubits; ++q) {
    PauliVector z(code.num_qubits), x(code.num_qubits);
    z.set(q, Pauli::Z);
    x.set(q, Pauli::X);
    const auto sz = syndrome(code.standard, z), sx = syndrome(code.standard, x);
    std::vector<int> vz, px;
    for (std::size_t j = 0; j < code.sites(); ++j) {
      if (sz[j]) vz.push_back(static_cast<int>(j));
      if (sx[code.sites() + j]) px.push_back(static_cast<int>(j));
    }
    ASSERT_EQ(vz.size(), 2u);
    ASSERT_EQ(px.size(), 2u);
    EXPECT_EQ(geo.vertex.qubit_endpoints[q][0], vz[0]);
    EXPECT_EQ(geo.vertex.qubit_endpoints[q][1], vz[1]);
    EXPECT_EQ(geo.plaquette.qubit_endpoints[q][0], px[0]);
    EXPECT_EQ(geo.plaquette.qubit_endpoints[q][1], px[1]);
  }
}

TEST(ToricCode, MatrixKindNames) {
  EXPECT_EQ(matrix_kind_from_string("oc"), MatrixKind::Overcomplete);
  EXPECT_EQ(matrix_kind_from_string(to_string(MatrixKind::Standard)), MatrixKind::Standard);
  EXPECT_THROW(matrix_kind_from_string("dense"), std::invalid_argument);
}

}  // namespace
}  // namespace toricnbm
