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

#include "toricnbm/noise.hpp"

#include <cmath>
#include <string>

#include "toricnbm/errors.hpp"

namespace toricnbm {

DepolarizingChannel::DepolarizingChannel(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw ConfigError("depolarizing channel: epsilon must lie in [0, 1), got " + std::to_string(epsilon));
}

Quaternary DepolarizingChannel::prior() const {
  const double e3 = epsilon_ / 3.0;
  return {1.0 - epsilon_, e3, e3, e3};
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 shot_rng(ShotSeed seed) {
  const std::uint64_t a = mix64(seed.master);
  const std::uint64_t b = mix64(a ^ mix64(seed.index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

PauliVector sample_error(const DepolarizingChannel& channel, std::size_t num_qubits, std::mt19937_64& rng) {
  PauliVector e(num_qubits);
  const double eps = channel.epsilon();
  if (eps == 0.0) return e;
  for (std::size_t q = 0; q < num_qubits; ++q) {
    const double u = uniform01(rng);
    if (u >= eps) continue;
    // Conditioned on u < eps, u is uniform on [0, eps): split into thirds.
    const double t = 3.0 * u / eps;
    e.set(q, t < 1.0 ? Pauli::X : (t < 2.0 ? Pauli::Y : Pauli::Z));
  }
  return e;
}

PauliVector sample_error(const DepolarizingChannel& channel, std::size_t num_qubits, ShotSeed seed) {
  auto rng = shot_rng(seed);
  return sample_error(channel, num_qubits, rng);
}

}  // namespace toricnbm
