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
#include <cstdint>
#include <random>

#include "toricnbm/pauli.hpp"

namespace toricnbm {

/// Probabilities indexed by Pauli (I, X, Y, Z).
using Quaternary = std::array<double, 4>;

/// i.i.d. depolarizing noise: I w.p. 1 - eps, each of X, Y, Z w.p. eps / 3.
class DepolarizingChannel {
 public:
  explicit DepolarizingChannel(double epsilon);
  double epsilon() const { return epsilon_; }
  Quaternary prior() const;

 private:
  double epsilon_;
};

/// Identifies the random stream of one Monte Carlo shot.
struct ShotSeed {
  std::uint64_t master = 0;
  std::uint64_t index = 0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent generator for one shot. The stream depends only on (master,
/// index), so shot i is the same whichever worker draws it.
std::mt19937_64 shot_rng(ShotSeed seed);

/// Uniform double in [0, 1) with 53 random bits; portable across standard libraries.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PauliVector sample_error(const DepolarizingChannel& channel, std::size_t num_qubits, std::mt19937_64& rng);
PauliVector sample_error(const DepolarizingChannel& channel, std::size_t num_qubits, ShotSeed seed);

}  // namespace toricnbm
