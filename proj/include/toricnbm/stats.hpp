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

#include <cstdint>
#include <utility>

namespace toricnbm {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact equal-tailed interval for a failure probability estimated by
/// sampling until `failures` failures occurred, which took `shots` trials.
///
/// With N the trial count at the r-th failure, P(N <= n | p) = P(Bin(n, p) >= r)
/// and P(N >= n | p) = P(Bin(n - 1, p) <= r - 1); each tail is inverted at
/// (1 - level) / 2. With zero failures the lower bound is 0 and the whole
/// (1 - level) goes to the upper tail: high = 1 - (1 - level)^(1 / shots).
Interval negbin_ci(std::uint64_t failures, std::uint64_t shots, double level = 0.975);

/// Clopper-Pearson interval for a fixed number of trials (used when a run
/// stops at its shot cap before reaching the failure target).
Interval binomial_ci(std::uint64_t failures, std::uint64_t shots, double level = 0.975);

}  // namespace toricnbm
