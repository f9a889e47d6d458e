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

#include "toricnbm/stats.hpp"

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "toricnbm/errors.hpp"

namespace toricnbm {
namespace {

void check_args(std::uint64_t failures, std::uint64_t shots, double level) {
  if (failures > shots) throw ConfigError("confidence interval: failures exceed shots");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence interval: level must lie in (0, 1)");
}

double zero_failure_upper(std::uint64_t shots, double level) {
  if (shots == 0) return 1.0;
  return -std::expm1(std::log1p(-level) / static_cast<double>(shots));
}

}  // namespace

Interval negbin_ci(std::uint64_t failures, std::uint64_t shots, double level) {
  check_args(failures, shots, level);
  if (failures == 0) return {0.0, zero_failure_upper(shots, level)};
  const double tail = (1.0 - level) / 2.0;
  const auto r = static_cast<double>(failures);
  const auto n = static_cast<double>(shots);
  Interval ci;
  // P(Bin(n, p) >= r) = I_p(r, n - r + 1).
  ci.low = boost::math::ibeta_inv(r, n - r + 1.0, tail);
  // P(Bin(n - 1, p) <= r - 1) = 1 - I_p(r, n - r).
  ci.high = failures == shots ? 1.0 : boost::math::ibeta_inv(r, n - r, 1.0 - tail);
  return ci;
}

Interval binomial_ci(std::uint64_t failures, std::uint64_t shots, double level) {
  check_args(failures, shots, level);
  if (failures == 0) return {0.0, zero_failure_upper(shots, level)};
  const double tail = (1.0 - level) / 2.0;
  const auto r = static_cast<double>(failures);
  const auto n = static_cast<double>(shots);
  Interval ci;
  ci.low = boost::math::ibeta_inv(r, n - r + 1.0, tail);
  ci.high = failures == shots ? 1.0 : boost::math::ibeta_inv(r + 1.0, n - r, 1.0 - tail);
  return ci;
}

}  // namespace toricnbm
