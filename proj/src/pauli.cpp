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

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "toricnbm/errors.hpp"

namespace toricnbm {

char to_char(Pauli p) {
  static constexpr char kChars[4] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I':
    case '_': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw ConfigError(std::string("not a Pauli character: '") + c + "'");
  }
}

PauliVector PauliVector::from_string(std::string_view s) {
  PauliVector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v.set(i, pauli_from_char(s[i]));
  return v;
}

std::size_t PauliVector::weight() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) w += (x_[i] | z_[i]) != 0;
  return w;
}

std::string PauliVector::to_string() const {
  std::string s(size(), 'I');
  for (std::size_t i = 0; i < size(); ++i) s[i] = to_char((*this)[i]);
  return s;
}

PauliVector& PauliVector::operator*=(const PauliVector& other) {
  if (other.size() != size()) throw ConfigError("pauli_mul: length mismatch");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    x_[i] ^= other.x_[i];
    z_[i] ^= other.z_[i];
  }
  return *this;
}

PauliVector pauli_mul(const PauliVector& a, const PauliVector& b) {
  PauliVector out = a;
  out *= b;
  return out;
}

int symplectic_product(const PauliVector& a, const PauliVector& b) {
  if (a.size() != b.size()) throw ConfigError("symplectic_product: length mismatch");
  int acc = 0;
  auto ax = a.x(), az = a.z(), bx = b.x(), bz = b.z();
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= (ax[i] & bz[i]) ^ (az[i] & bx[i]);
  return acc;
}

SparseCheckMatrix::SparseCheckMatrix(std::size_t num_qubits, std::vector<std::vector<CheckEntry>> rows)
    : num_qubits_(num_qubits), rows_(std::move(rows)) {
  offsets_.reserve(rows_.size() + 1);
  offsets_.push_back(0);
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end(), [](const CheckEntry& a, const CheckEntry& b) { return a.qubit < b.qubit; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k].qubit >= num_qubits_) throw ConfigError("check matrix: qubit index out of range");
      if (row[k].pauli == Pauli::I) throw ConfigError("check matrix: identity entry");
      if (k > 0 && row[k - 1].qubit == row[k].qubit) throw ConfigError("check matrix: duplicate qubit in row");
    }
    offsets_.push_back(offsets_.back() + row.size());
  }
}

PauliVector SparseCheckMatrix::row_as_vector(std::size_t j) const {
  PauliVector v(num_qubits_);
  for (const auto& e : rows_[j]) v.set(e.qubit, e.pauli);
  return v;
}

void SparseCheckMatrix::write_text(std::ostream& out) const {
  out << num_rows() << ' ' << num_qubits_ << '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ' ';
      out << row[k].qubit << ':' << to_char(row[k].pauli);
    }
    out << '\n';
  }
}

SparseCheckMatrix SparseCheckMatrix::read_text(std::istream& in) {
  std::string line;
  std::size_t m = 0, n = 0;
  if (!std::getline(in, line)) throw IoError("check matrix: missing header");
  {
    std::istringstream header(line);
    if (!(header >> m >> n)) throw ConfigError("check matrix: malformed header '" + line + "'");
  }
  std::vector<std::vector<CheckEntry>> rows;
  rows.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::getline(in, line)) throw IoError("check matrix: expected " + std::to_string(m) + " rows");
    std::istringstream ls(line);
    std::string tok;
    std::vector<CheckEntry> row;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon + 2 != tok.size())
        throw ConfigError("check matrix: malformed entry '" + tok + "'");
      CheckEntry e;
      try {
        e.qubit = static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon)));
      } catch (const std::exception&) {
        throw ConfigError("check matrix: malformed entry '" + tok + "'");
      }
      e.pauli = pauli_from_char(tok[colon + 1]);
      row.push_back(e);
    }
    rows.push_back(std::move(row));
  }
  return SparseCheckMatrix(n, std::move(rows));
}

Syndrome syndrome(const SparseCheckMatrix& h, const PauliVector& e) {
  if (h.num_qubits() != e.size()) throw ConfigError("syndrome: length mismatch");
  Syndrome s(h.num_rows(), 0);
  for (std::size_t j = 0; j < h.num_rows(); ++j) {
    int bit = 0;
    for (const auto& entry : h.row(j)) bit ^= symplectic_product(entry.pauli, e[entry.qubit]);
    s[j] = static_cast<std::uint8_t>(bit);
  }
  return s;
}

bool commutes_with_all(const PauliVector& v, const SparseCheckMatrix& m) {
  auto s = syndrome(m, v);
  return std::all_of(s.begin(), s.end(), [](std::uint8_t b) { return b == 0; });
}

std::size_t symplectic_rank(std::span<const PauliVector> ops) {
  if (ops.empty()) return 0;
  const std::size_t n = ops.front().size();
  const std::size_t cols = 2 * n;
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(ops.size());
  for (const auto& op : ops) {
    if (op.size() != n) throw ConfigError("symplectic_rank: length mismatch");
    std::vector<std::uint64_t> r(words, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (op.x()[i]) r[i / 64] |= std::uint64_t{1} << (i % 64);
      if (op.z()[i]) r[(n + i) / 64] |= std::uint64_t{1} << ((n + i) % 64);
    }
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t mask = std::uint64_t{1} << (col % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][w] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r][w] & mask)) {
        for (std::size_t k = 0; k < words; ++k) rows[r][k] ^= rows[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

std::size_t symplectic_rank(const SparseCheckMatrix& h) {
  std::vector<PauliVector> ops;
  ops.reserve(h.num_rows());
  for (std::size_t j = 0; j < h.num_rows(); ++j) ops.push_back(h.row_as_vector(j));
  return symplectic_rank(ops);
}

std::string bits_to_hex(std::span<const std::uint8_t> bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((bits.size() + 3) / 4, '0');
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (!bits[j]) continue;
    int nibble = (out[j / 4] <= '9') ? out[j / 4] - '0' : out[j / 4] - 'a' + 10;
    nibble |= 1 << (3 - j % 4);
    out[j / 4] = kDigits[nibble];
  }
  return out;
}

std::vector<std::uint8_t> bits_from_hex(std::string_view hex, std::size_t num_bits) {
  if (hex.size() != (num_bits + 3) / 4)
    throw ConfigError("hex bit string has " + std::to_string(hex.size()) + " digits, expected " +
                      std::to_string((num_bits + 3) / 4));
  std::vector<std::uint8_t> bits(num_bits, 0);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[k])));
    int nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else throw ConfigError(std::string("invalid hex digit '") + hex[k] + "'");
    for (int b = 0; b < 4; ++b) {
      const std::size_t j = 4 * k + b;
      const bool set = (nibble >> (3 - b)) & 1;
      if (j < num_bits) bits[j] = set;
      else if (set) throw ConfigError("hex bit string sets padding bits");
    }
  }
  return bits;
}

}  // namespace toricnbm
