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

#include "toricnbm/pauli.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"

namespace toricnbm {
namespace {

TEST(Pauli, SymplecticProductTable) {
  // Rows/cols in I, X, Y, Z order.
  const int expected[4][4] = {{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0}};
  for (Pauli a : kAllPaulis)
    for (Pauli b : kAllPaulis)
      EXPECT_EQ(symplectic_product(a, b), expected[static_cast<int>(a)][static_cast<int>(b)]);
}

TEST(Pauli, Gf4RoundTripAndAddition) {
  for (Pauli p : kAllPaulis) EXPECT_EQ(from_gf4(to_gf4(p)), p);
  EXPECT_EQ(to_gf4(Pauli::Y), Gf4::One);
  // Addition in GF(4) is XOR of the (x, z) pair, i.e. Pauli multiplication.
  for (Pauli a : kAllPaulis)
    for (Pauli b : kAllPaulis) {
      PauliVector va(1), vb(1);
      va.set(0, a);
      vb.set(0, b);
      const Pauli prod = (va * vb)[0];
      EXPECT_EQ(static_cast<int>(to_gf4(prod)), static_cast<int>(to_gf4(a)) ^ static_cast<int>(to_gf4(b)));
    }
}

TEST(Pauli, StringRoundTrip) {
  const auto v = PauliVector::from_string("IXYZ_Z");
  EXPECT_EQ(v.to_string(), "IXYZIZ");
  EXPECT_EQ(v.weight(), 4u);
  EXPECT_THROW(PauliVector::from_string("XQ"), std::invalid_argument);
}

TEST(Pauli, RejectsMalformedRows) {
  EXPECT_THROW(SparseCheckMatrix(3, {{{0, Pauli::X}, {0, Pauli::Z}}}), std::invalid_argument);
  EXPECT_THROW(SparseCheckMatrix(3, {{{3, Pauli::X}}}), std::invalid_argument);
  EXPECT_THROW(SparseCheckMatrix(3, {{{1, Pauli::I}}}), std::invalid_argument);
}

TEST(Pauli, SyndromeMatchesDenseOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 12, m = 1 + rng() % 10;
    std::vector<std::vector<CheckEntry>> rows(m);
    for (auto& row : rows)
      for (std::uint32_t q = 0; q < n; ++q)
        if (rng() % 3 == 0) row.push_back({q, static_cast<Pauli>(1 + rng() % 3)});
    const SparseCheckMatrix h(n, rows);
    PauliVector e(n);
    for (std::size_t i = 0; i < n; ++i) e.set(i, static_cast<Pauli>(rng() % 4));
    EXPECT_EQ(syndrome(h, e), oracle::dense_syndrome(oracle::to_dense(h), oracle::to_paulis(e)));
  }
}

TEST(Pauli, TextRoundTrip) {
  const SparseCheckMatrix h(4, {{{2, Pauli::Z}, {0, Pauli::X}}, {{3, Pauli::Y}}});
  std::stringstream ss;
  h.write_text(ss);
  EXPECT_EQ(SparseCheckMatrix::read_text(ss), h);
  EXPECT_EQ(h.row(0)[0].qubit, 0u);  // rows are sorted
}

TEST(Pauli, RankOfDependentRows) {
  const auto a = PauliVector::from_string("XXI");
  const auto b = PauliVector::from_string("IXX");
  const std::vector<PauliVector> ops{a, b, a * b, PauliVector::from_string("ZZZ")};
  EXPECT_EQ(symplectic_rank(ops), 3u);
}

TEST(Pauli, HexRoundTrip) {
  const std::vector<std::uint8_t> bits{1, 0, 1, 1, 0, 1};
  EXPECT_EQ(bits_to_hex(bits), "b4");
  EXPECT_EQ(bits_from_hex("b4", bits.size()), bits);
}

}  // namespace
}  // namespace toricnbm
