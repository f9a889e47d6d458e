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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace toricnbm {

// Single-qubit Pauli with phases discarded. The enumerator order (I, X, Y, Z)
// is also the index order of every quaternary distribution in the library.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr Pauli kAllPaulis[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

constexpr bool x_bit(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
constexpr bool z_bit(Pauli p) { return p == Pauli::Z || p == Pauli::Y; }

constexpr Pauli pauli_from_bits(bool x, bool z) {
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

/// 1 iff `a` and `b` anticommute: x_a z_b + z_a x_b mod 2.
constexpr int symplectic_product(Pauli a, Pauli b) {
  return (static_cast<int>(x_bit(a) && z_bit(b)) ^ static_cast<int>(z_bit(a) && x_bit(b)));
}

/// Elements of GF(4) = {0, 1, w, w^2}, with w^2 written OmegaBar.
enum class Gf4 : std::uint8_t { Zero = 0, One = 1, Omega = 2, OmegaBar = 3 };

/// (x, z) -> x*w + z*wbar. Since w + wbar = 1, Y maps to One.
constexpr Gf4 to_gf4(Pauli p) {
  switch (p) {
    case Pauli::I: return Gf4::Zero;
    case Pauli::X: return Gf4::Omega;
    case Pauli::Z: return Gf4::OmegaBar;
    case Pauli::Y: return Gf4::One;
  }
  return Gf4::Zero;
}

constexpr Pauli from_gf4(Gf4 g) {
  switch (g) {
    case Gf4::Zero: return Pauli::I;
    case Gf4::Omega: return Pauli::X;
    case Gf4::OmegaBar: return Pauli::Z;
    case Gf4::One: return Pauli::Y;
  }
  return Pauli::I;
}

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// n-qubit Pauli operator in symplectic (x|z) form.
class PauliVector {
 public:
  PauliVector() = default;
  explicit PauliVector(std::size_t n) : x_(n, 0), z_(n, 0) {}

  /// Parses a string such as "XIZY"; '_' is accepted for identity.
  static PauliVector from_string(std::string_view s);

  std::size_t size() const { return x_.size(); }
  Pauli operator[](std::size_t i) const { return pauli_from_bits(x_[i] != 0, z_[i] != 0); }
  void set(std::size_t i, Pauli p) {
    x_[i] = x_bit(p);
    z_[i] = z_bit(p);
  }
  /// Multiplies qubit i by p (phase dropped).
  void apply(std::size_t i, Pauli p) {
    x_[i] ^= static_cast<std::uint8_t>(x_bit(p));
    z_[i] ^= static_cast<std::uint8_t>(z_bit(p));
  }

  std::span<const std::uint8_t> x() const { return x_; }
  std::span<const std::uint8_t> z() const { return z_; }

  std::size_t weight() const;
  bool is_identity() const { return weight() == 0; }
  std::string to_string() const;

  PauliVector& operator*=(const PauliVector& other);
  friend bool operator==(const PauliVector&, const PauliVector&) = default;

 private:
  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> z_;
};

PauliVector pauli_mul(const PauliVector& a, const PauliVector& b);
inline PauliVector operator*(const PauliVector& a, const PauliVector& b) { return pauli_mul(a, b); }

/// Symplectic inner product of two n-qubit operators.
int symplectic_product(const PauliVector& a, const PauliVector& b);

struct CheckEntry {
  std::uint32_t qubit = 0;
  Pauli pauli = Pauli::I;
  friend bool operator==(const CheckEntry&, const CheckEntry&) = default;
};

/// Row-major sparse GF(4) check matrix. Rows are kept sorted by qubit index.
/// Tanner edges are numbered row by row, so edge e of row j lives at
/// row_offset(j) + position-within-row.
class SparseCheckMatrix {
 public:
  SparseCheckMatrix() = default;
  SparseCheckMatrix(std::size_t num_qubits, std::vector<std::vector<CheckEntry>> rows);

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_edges() const { return offsets_.empty() ? 0 : offsets_.back(); }

  std::span<const CheckEntry> row(std::size_t j) const { return rows_[j]; }
  const std::vector<std::vector<CheckEntry>>& rows() const { return rows_; }
  std::size_t row_offset(std::size_t j) const { return offsets_[j]; }

  PauliVector row_as_vector(std::size_t j) const;

  /// Text format: header `m n`, then per row space-separated `qubit:pauli`.
  void write_text(std::ostream& out) const;
  static SparseCheckMatrix read_text(std::istream& in);

  friend bool operator==(const SparseCheckMatrix& a, const SparseCheckMatrix& b) {
    return a.num_qubits_ == b.num_qubits_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t num_qubits_ = 0;
  std::vector<std::vector<CheckEntry>> rows_;
  std::vector<std::size_t> offsets_;
};

/// Bit j is 1 when check j anticommutes with the error (a defect).
using Syndrome = std::vector<std::uint8_t>;

Syndrome syndrome(const SparseCheckMatrix& h, const PauliVector& e);
bool commutes_with_all(const PauliVector& v, const SparseCheckMatrix& m);

/// Rank over F2 of the 2n-column binary (x|z) form of the given operators.
std::size_t symplectic_rank(std::span<const PauliVector> ops);
std::size_t symplectic_rank(const SparseCheckMatrix& h);

/// Hex encoding of a bit string, most significant bit of each nibble first.
std::string bits_to_hex(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> bits_from_hex(std::string_view hex, std::size_t num_bits);

}  // namespace toricnbm
