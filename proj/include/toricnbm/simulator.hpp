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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toricnbm/bp.hpp"
#include "toricnbm/matching.hpp"
#include "toricnbm/stats.hpp"
#include "toricnbm/toric_code.hpp"
#include "toricnbm/weights.hpp"

namespace toricnbm {

enum class Variant {
  Mwpm,           // matching with channel-prior weights only
  Bp,             // plain BP, standard matrix
  BpMatch,        // belief-matching
  NbpMatch,       // dense NBP on the standard matrix, then matching
  RnbpMatch,      // dense NBP on the overcomplete matrix, then matching
  ConvRnbpMatch,  // convolutional NBP on the overcomplete matrix, then matching
  Nbp,
  Rnbp,
  ConvRnbp,
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct VariantTraits {
  bool first_stage;
  bool second_stage;
  bool needs_weights;
  MatrixKind matrix;
};
VariantTraits traits(Variant v);

/// Redundant-row syndrome bits follow from the standard ones: each weight-6
/// row is the product of two weight-4 rows.
Syndrome overcomplete_syndrome(const ToricCode& code, const Syndrome& standard_syndrome);

/// Binds `ws` for use by `variant` at `code`'s distance, transferring Conv
/// sets as needed. Throws ConfigError on a kind, matrix or distance mismatch.
EdgeWeights resolve_weights(Variant variant, const WeightSet& ws, const ToricCode& code);

/// Throws ConfigError unless `s` is a standard syndrome some error can produce
/// (right length, even defect count in both sectors).
void check_syndrome(const ToricCode& code, const Syndrome& s);

struct DecodeOptions {
  bool second_stage = true;      // run matching when BP does not converge
  bool posterior_weights = true; // false: match with channel-prior weights
};

/// Full per-shot decoding pipeline. Owns mutable BP scratch: one per worker.
class ShotDecoder {
 public:
  ShotDecoder(const ToricCode& code, Variant variant, double epsilon, const BpConfig& bp,
              std::optional<EdgeWeights> weights, DecodeOptions options);
  ShotDecoder(const ToricCode& code, Variant variant, double epsilon, const BpConfig& bp,
              std::optional<EdgeWeights> weights = std::nullopt);

  struct Outcome {
    PauliVector correction;
    bool converged = false;    // first stage reproduced the syndrome
    bool second_stage = false; // matching ran
    int bp_iterations = 0;
  };

  Outcome decode(const Syndrome& standard_syndrome);

 private:
  const ToricCode* code_;
  Variant variant_;
  VariantTraits traits_;
  double epsilon_;
  BpConfig bp_cfg_;
  std::optional<EdgeWeights> weights_;
  DecodeOptions options_;
  std::optional<BpDecoder> bp_;
  MatchingDecoder matcher_;
};

/// Word error test: the residual e * correction must commute with all four
/// logical generators. Requires matching standard syndromes.
bool is_logical_failure(const PauliVector& error, const PauliVector& correction, const ToricCode& code);

struct SimConfig {
  int distance = 4;
  double epsilon = 0.05;
  Variant variant = Variant::Mwpm;
  std::string weights_file;          // echoed into reports
  std::uint64_t target_failures = 100;
  std::uint64_t max_shots = 10'000'000;
  std::uint64_t seed = 1;
  int workers = 1;
  int max_iterations = 0;            // 0: 2d
  std::uint64_t block_size = 256;    // shots per work unit; part of the determinism contract

  void validate() const;
};

struct RunStats {
  std::uint64_t shots = 0;
  std::uint64_t failures = 0;
  double ler = 0.0;
  Interval ci;
  std::uint64_t stage2_calls = 0;
  double stage2_fraction = 0.0;
  double mean_bp_iters = 0.0;
  int max_bp_iters = 0;
  std::uint64_t bp_nonconverged = 0;
  double wall_seconds = 0.0;
};

/// Monte Carlo for one (d, epsilon, variant) point. Stops at the shot that
/// produces the target-th failure, or at max_shots. Results depend only on
/// the seed, not on the worker count.
RunStats run_point(const SimConfig& cfg, const WeightSet* weights = nullptr);

struct SweepConfig {
  std::vector<int> distances{4};
  std::vector<double> epsilons{0.05};
  std::vector<Variant> variants{Variant::Mwpm};
  std::string weights_file;  // used by weighted variants
  std::uint64_t target_failures = 100;
  std::uint64_t max_shots = 10'000'000;
  std::uint64_t seed = 1;
  int workers = 1;
  int max_iterations = 0;
};

struct SweepRow {
  int d = 0;
  double epsilon = 0.0;
  std::string variant;
  std::string weights_file;
  std::uint64_t seed = 0;
  bool ok = true;
  RunStats stats;
};

inline constexpr const char* kCsvHeader =
    "d,epsilon,variant,weights_file,shots,failures,ler,ci_low,ci_high,stage2_calls,stage2_fraction,"
    "mean_bp_iters,max_bp_iters,seed";

std::string format_csv_row(const SweepRow& row);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::size_t invariant_violations = 0;
  std::size_t failed_points = 0;
};

/// Runs every grid point, appending one CSV row each to `csv`. Points already
/// present in `done` (same d, epsilon, variant, weights and seed) are skipped.
/// A failing point yields a row with NaN statistics and the sweep continues.
SweepOutcome sweep(const SweepConfig& cfg, std::ostream& csv, const std::vector<SweepRow>& done = {},
                   std::ostream* log = nullptr);

/// Writes ler_vs_epsilon.csv and stage2_fraction_vs_epsilon.csv into `dir`,
/// one series per (d, variant).
void write_plot_data(const std::vector<SweepRow>& rows, const std::string& dir);

}  // namespace toricnbm
