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

#include "toricnbm/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "toricnbm/errors.hpp"
#include "toricnbm/noise.hpp"

namespace toricnbm {
namespace {

struct VariantName {
  Variant variant;
  const char* name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::Mwpm, "mwpm"},       {Variant::Bp, "bp"},
    {Variant::BpMatch, "bp+match"}, {Variant::NbpMatch, "nbp+match"},
    {Variant::RnbpMatch, "rnbp+match"}, {Variant::ConvRnbpMatch, "conv-rnbp+match"},
    {Variant::Nbp, "nbp"},         {Variant::Rnbp, "rnbp"},
    {Variant::ConvRnbp, "conv-rnbp"},
};

struct ShotRecord {
  bool failure = false;
  bool stage2 = false;
  bool converged = false;
  int iterations = 0;
};

bool parity_even(const std::vector<int>& defects) { return defects.size() % 2 == 0; }

}  // namespace

std::string to_string(Variant v) {
  for (const auto& vn : kVariantNames)
    if (vn.variant == v) return vn.name;
  return "?";
}

Variant variant_from_string(const std::string& s) {
  for (const auto& vn : kVariantNames)
    if (s == vn.name) return vn.variant;
  throw ConfigError("unknown decoder variant '" + s + "'");
}

VariantTraits traits(Variant v) {
  using M = MatrixKind;
  switch (v) {
    case Variant::Mwpm: return {false, true, false, M::Standard};
    case Variant::Bp: return {true, false, false, M::Standard};
    case Variant::BpMatch: return {true, true, false, M::Standard};
    case Variant::NbpMatch: return {true, true, true, M::Standard};
    case Variant::RnbpMatch: return {true, true, true, M::Overcomplete};
    case Variant::ConvRnbpMatch: return {true, true, true, M::Overcomplete};
    case Variant::Nbp: return {true, false, true, M::Standard};
    case Variant::Rnbp: return {true, false, true, M::Overcomplete};
    case Variant::ConvRnbp: return {true, false, true, M::Overcomplete};
  }
  return {false, false, false, M::Standard};
}

Syndrome overcomplete_syndrome(const ToricCode& code, const Syndrome& standard_syndrome) {
  const std::size_t sites = code.sites();
  if (standard_syndrome.size() != 2 * sites) throw ConfigError("overcomplete_syndrome: expected a standard syndrome");
  Syndrome s(3 * code.num_qubits, 0);
  std::copy(standard_syndrome.begin(), standard_syndrome.end(), s.begin());
  for (std::size_t j = 2 * sites; j < s.size(); ++j) {
    const auto cc = code.check_coord(j);
    const bool vertex = cc.family == CheckFamily::VertexPairH || cc.family == CheckFamily::VertexPairV;
    const bool horizontal = cc.family == CheckFamily::VertexPairH || cc.family == CheckFamily::PlaquettePairH;
    const CheckFamily base = vertex ? CheckFamily::Vertex4 : CheckFamily::Plaquette4;
    const std::size_t a = code.check_index(base, cc.row, cc.col);
    const std::size_t b = horizontal ? code.check_index(base, cc.row, cc.col + 1) : code.check_index(base, cc.row + 1, cc.col);
    s[j] = standard_syndrome[a] ^ standard_syndrome[b];
  }
  return s;
}

EdgeWeights resolve_weights(Variant variant, const WeightSet& ws, const ToricCode& code) {
  const auto tr = traits(variant);
  if (!tr.needs_weights) throw ConfigError("variant " + to_string(variant) + " takes no weights");
  if (ws.matrix != tr.matrix)
    throw ConfigError("variant " + to_string(variant) + " needs weights for the " + to_string(tr.matrix) +
                      " matrix, file has " + to_string(ws.matrix));
  const bool conv_variant = variant == Variant::ConvRnbp || variant == Variant::ConvRnbpMatch;
  if (conv_variant) {
    if (ws.kind == WeightKind::Dense && !ws.transferred_from)
      throw ConfigError("variant " + to_string(variant) + " needs conv weights (or a transferred set)");
  } else if (ws.kind != WeightKind::Dense || ws.transferred_from) {
    throw ConfigError("variant " + to_string(variant) + " needs dense weights");
  }
  return bind(ws, code);
}

ShotDecoder::ShotDecoder(const ToricCode& code, Variant variant, double epsilon, const BpConfig& bp,
                         std::optional<EdgeWeights> weights)
    : ShotDecoder(code, variant, epsilon, bp, std::move(weights), DecodeOptions{}) {}

ShotDecoder::ShotDecoder(const ToricCode& code, Variant variant, double epsilon, const BpConfig& bp,
                         std::optional<EdgeWeights> weights, DecodeOptions options)
    : code_(&code),
      variant_(variant),
      traits_(traits(variant)),
      epsilon_(epsilon),
      bp_cfg_(bp),
      weights_(std::move(weights)),
      options_(options),
      matcher_(code) {
  DepolarizingChannel check(epsilon);
  (void)check;
  if (traits_.needs_weights && !weights_) throw ConfigError("variant " + to_string(variant) + " requires weights");
  if (!traits_.needs_weights && weights_) throw ConfigError("variant " + to_string(variant) + " takes no weights");
  if (traits_.first_stage) {
    bp_.emplace(code.matrix(traits_.matrix));
    if (weights_ && weights_->num_edges() != bp_->graph().num_edges())
      throw ConfigError("weights do not match the decoder's check matrix");
  }
}

void check_syndrome(const ToricCode& code, const Syndrome& s) {
  if (s.size() != code.standard.num_rows())
    throw ConfigError("syndrome has " + std::to_string(s.size()) + " bits, expected " +
                      std::to_string(code.standard.num_rows()));
  if (!parity_even(sector_defects(code, s, Sector::Vertex)) || !parity_even(sector_defects(code, s, Sector::Plaquette)))
    throw ConfigError("syndrome has an odd number of defects in a sector; no Pauli error produces it");
}

ShotDecoder::Outcome ShotDecoder::decode(const Syndrome& standard_syndrome) {
  check_syndrome(*code_, standard_syndrome);
  Outcome out;
  if (!traits_.first_stage) {
    out.second_stage = true;
    out.correction = matcher_.mwpm_baseline(standard_syndrome, epsilon_);
    return out;
  }
  const Syndrome s = traits_.matrix == MatrixKind::Standard ? standard_syndrome
                                                            : overcomplete_syndrome(*code_, standard_syndrome);
  const DepolarizingChannel channel(epsilon_);
  BpResult r = bp_->decode(s, channel.prior(), bp_cfg_, weights_ ? &*weights_ : nullptr);
  out.converged = r.converged;
  out.bp_iterations = r.iterations_used;
  if (r.converged || !(traits_.second_stage && options_.second_stage)) {
    out.correction = std::move(r.hard_decision);
    return out;
  }
  out.second_stage = true;
  out.correction = options_.posterior_weights ? matcher_.belief_match(standard_syndrome, r.marginals)
                                              : matcher_.mwpm_baseline(standard_syndrome, epsilon_);
  return out;
}

bool is_logical_failure(const PauliVector& error, const PauliVector& correction, const ToricCode& code) {
  if (syndrome(code.standard, error) != syndrome(code.standard, correction))
    throw InvariantViolation("is_logical_failure: correction does not reproduce the syndrome");
  const PauliVector residual = pauli_mul(error, correction);
  for (const auto& logical : code.logicals)
    if (symplectic_product(residual, logical)) return true;
  return false;
}

void SimConfig::validate() const {
  if (distance < 3) throw ConfigError("simulate: d must be >= 3");
  DepolarizingChannel check(epsilon);
  (void)check;
  if (target_failures < 1) throw ConfigError("simulate: target failures must be >= 1");
  if (max_shots < target_failures) throw ConfigError("simulate: max shots must be >= target failures");
  if (workers < 1) throw ConfigError("simulate: workers must be >= 1");
  if (max_iterations < 0) throw ConfigError("simulate: max iterations must be >= 0");
  if (block_size < 1) throw ConfigError("simulate: block size must be >= 1");
}

RunStats run_point(const SimConfig& cfg, const WeightSet* weights) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ToricCode code = build_toric(cfg.distance);
  const auto tr = traits(cfg.variant);
  std::optional<EdgeWeights> bound;
  if (tr.needs_weights) {
    if (!weights) throw ConfigError("variant " + to_string(cfg.variant) + " requires a weights file");
    bound = resolve_weights(cfg.variant, *weights, code);
  }
  BpConfig bp;
  bp.max_iterations = cfg.max_iterations > 0 ? cfg.max_iterations : 2 * cfg.distance;
  const DepolarizingChannel channel(cfg.epsilon);

  auto run_block = [&](ShotDecoder& dec, std::uint64_t block) {
    std::vector<ShotRecord> recs;
    const std::uint64_t first = block * cfg.block_size;
    const std::uint64_t last = std::min(first + cfg.block_size, cfg.max_shots);
    recs.reserve(last - first);
    for (std::uint64_t idx = first; idx < last; ++idx) {
      const PauliVector error = sample_error(channel, code.num_qubits, ShotSeed{cfg.seed, idx});
      const Syndrome s = syndrome(code.standard, error);
      if (!parity_even(sector_defects(code, s, Sector::Vertex)) || !parity_even(sector_defects(code, s, Sector::Plaquette)))
        throw InvariantViolation("odd defect count in a sector at shot " + std::to_string(idx));
      auto out = dec.decode(s);
      ShotRecord rec;
      rec.stage2 = out.second_stage;
      rec.converged = out.converged;
      rec.iterations = out.bp_iterations;
      const bool consistent = syndrome(code.standard, out.correction) == s;
      if (tr.second_stage && !consistent)
        throw InvariantViolation("decoder output violates the measured syndrome at shot " + std::to_string(idx));
      rec.failure = consistent ? is_logical_failure(error, out.correction, code) : true;
      recs.push_back(rec);
    }
    return recs;
  };

  RunStats st;
  std::uint64_t iter_sum = 0;
  bool done = false;
  auto merge = [&](const std::vector<ShotRecord>& recs) {
    for (const auto& r : recs) {
      ++st.shots;
      st.failures += r.failure;
      st.stage2_calls += r.stage2;
      st.bp_nonconverged += tr.first_stage && !r.converged;
      iter_sum += r.iterations;
      st.max_bp_iters = std::max(st.max_bp_iters, r.iterations);
      if (st.failures >= cfg.target_failures || st.shots >= cfg.max_shots) {
        done = true;
        return;
      }
    }
  };

  const std::uint64_t num_blocks = (cfg.max_shots + cfg.block_size - 1) / cfg.block_size;
  if (cfg.workers <= 1) {
    ShotDecoder dec(code, cfg.variant, cfg.epsilon, bp, bound);
    for (std::uint64_t b = 0; b < num_blocks && !done; ++b) merge(run_block(dec, b));
  } else {
    // Workers claim blocks in index order; blocks are merged strictly in order
    // so the stopping shot never depends on scheduling.
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::uint64_t, std::vector<ShotRecord>> ready;
    std::atomic<std::uint64_t> next_block{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w) {
      pool.emplace_back([&] {
        try {
          ShotDecoder dec(code, cfg.variant, cfg.epsilon, bp, bound);
          while (!stop) {
            const std::uint64_t b = next_block++;
            if (b >= num_blocks) break;
            auto recs = run_block(dec, b);
            std::lock_guard lock(mu);
            ready.emplace(b, std::move(recs));
            cv.notify_all();
          }
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
          stop = true;
          cv.notify_all();
        }
      });
    }
    for (std::uint64_t b = 0; b < num_blocks && !done; ++b) {
      std::vector<ShotRecord> recs;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return ready.count(b) > 0 || error; });
        if (error && ready.count(b) == 0) break;
        recs = std::move(ready[b]);
        ready.erase(b);
      }
      merge(recs);
    }
    stop = true;
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  st.ler = st.shots ? static_cast<double>(st.failures) / static_cast<double>(st.shots) : 0.0;
  st.ci = st.failures >= cfg.target_failures ? negbin_ci(st.failures, st.shots) : binomial_ci(st.failures, st.shots);
  st.stage2_fraction = st.shots ? static_cast<double>(st.stage2_calls) / static_cast<double>(st.shots) : 0.0;
  st.mean_bp_iters = st.shots ? static_cast<double>(iter_sum) / static_cast<double>(st.shots) : 0.0;
  st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return st;
}

std::string format_csv_row(const SweepRow& row) {
  const auto& s = row.stats;
  char buf[512];
  if (!row.ok) {
    std::snprintf(buf, sizeof buf, "%d,%.6g,%s,%s,0,0,nan,nan,nan,0,nan,nan,0,%llu", row.d, row.epsilon,
                  row.variant.c_str(), row.weights_file.c_str(), static_cast<unsigned long long>(row.seed));
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%d,%.6g,%s,%s,%llu,%llu,%.9e,%.9e,%.9e,%llu,%.9e,%.6f,%d,%llu", row.d, row.epsilon,
                row.variant.c_str(), row.weights_file.c_str(), static_cast<unsigned long long>(s.shots),
                static_cast<unsigned long long>(s.failures), s.ler, s.ci.low, s.ci.high,
                static_cast<unsigned long long>(s.stage2_calls), s.stage2_fraction, s.mean_bp_iters, s.max_bp_iters,
                static_cast<unsigned long long>(row.seed));
  return buf;
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("d,", 0) == 0) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 14) throw ConfigError("sweep csv line " + std::to_string(lineno) + ": expected 14 fields");
    try {
      SweepRow r;
      r.d = std::stoi(f[0]);
      r.epsilon = std::stod(f[1]);
      r.variant = f[2];
      r.weights_file = f[3];
      r.stats.shots = std::stoull(f[4]);
      r.stats.failures = std::stoull(f[5]);
      r.stats.ler = std::stod(f[6]);
      r.stats.ci = {std::stod(f[7]), std::stod(f[8])};
      r.stats.stage2_calls = std::stoull(f[9]);
      r.stats.stage2_fraction = std::stod(f[10]);
      r.stats.mean_bp_iters = std::stod(f[11]);
      r.stats.max_bp_iters = std::stoi(f[12]);
      r.seed = std::stoull(f[13]);
      r.ok = std::isfinite(r.stats.ler);
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw ConfigError("sweep csv line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

SweepOutcome sweep(const SweepConfig& cfg, std::ostream& csv, const std::vector<SweepRow>& done, std::ostream* log) {
  SweepOutcome outcome;
  std::optional<WeightSet> ws;
  auto needs_weights = [](Variant v) { return traits(v).needs_weights; };
  if (std::any_of(cfg.variants.begin(), cfg.variants.end(), needs_weights)) {
    if (cfg.weights_file.empty()) throw ConfigError("sweep: weighted variants need a weights file");
    ws = load_weights(cfg.weights_file);
  }
  for (int d : cfg.distances) {
    for (double eps : cfg.epsilons) {
      for (Variant v : cfg.variants) {
        SweepRow row;
        row.d = d;
        row.epsilon = eps;
        row.variant = to_string(v);
        row.weights_file = needs_weights(v) ? cfg.weights_file : "";
        row.seed = cfg.seed;
        const bool already = std::any_of(done.begin(), done.end(), [&](const SweepRow& r) {
          return r.ok && r.d == d && std::abs(r.epsilon - eps) <= 1e-12 * std::max(1.0, eps) && r.variant == row.variant &&
                 r.weights_file == row.weights_file && r.seed == row.seed;
        });
        if (already) continue;
        SimConfig sc;
        sc.distance = d;
        sc.epsilon = eps;
        sc.variant = v;
        sc.weights_file = row.weights_file;
        sc.target_failures = cfg.target_failures;
        sc.max_shots = cfg.max_shots;
        sc.seed = cfg.seed;
        sc.workers = cfg.workers;
        sc.max_iterations = cfg.max_iterations;
        try {
          row.stats = run_point(sc, needs_weights(v) ? &*ws : nullptr);
          if (log)
            *log << "d=" << d << " eps=" << eps << " " << row.variant << ": " << row.stats.failures << "/"
                 << row.stats.shots << " failures, " << row.stats.wall_seconds << " s\n";
        } catch (const InvariantViolation& e) {
          row.ok = false;
          ++outcome.invariant_violations;
          if (log) *log << "invariant violation at d=" << d << " eps=" << eps << " " << row.variant << ": " << e.what() << '\n';
        } catch (const std::exception& e) {
          row.ok = false;
          ++outcome.failed_points;
          if (log) *log << "point failed at d=" << d << " eps=" << eps << " " << row.variant << ": " << e.what() << '\n';
        }
        csv << format_csv_row(row) << '\n';
        csv.flush();
        outcome.rows.push_back(std::move(row));
      }
    }
  }
  return outcome;
}

void write_plot_data(const std::vector<SweepRow>& rows, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<SweepRow> sorted;
  for (const auto& r : rows)
    if (r.ok) sorted.push_back(r);
  std::sort(sorted.begin(), sorted.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.variant, a.weights_file, a.d, a.epsilon) < std::tie(b.variant, b.weights_file, b.d, b.epsilon);
  });
  auto open = [&](const char* name) {
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw IoError(std::string("cannot write plot data ") + name);
    f << "series,d,variant,epsilon,value,ci_low,ci_high\n";
    return f;
  };
  std::ofstream ler = open("ler_vs_epsilon.csv");
  std::ofstream calls = open("stage2_fraction_vs_epsilon.csv");
  char buf[256];
  for (const auto& r : sorted) {
    const std::string series = r.variant + "@d" + std::to_string(r.d);
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%.6g,%.9e,%.9e,%.9e\n", series.c_str(), r.d, r.variant.c_str(), r.epsilon,
                  r.stats.ler, r.stats.ci.low, r.stats.ci.high);
    ler << buf;
    const Interval c = binomial_ci(r.stats.stage2_calls, r.stats.shots);
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%.6g,%.9e,%.9e,%.9e\n", series.c_str(), r.d, r.variant.c_str(), r.epsilon,
                  r.stats.stage2_fraction, c.low, c.high);
    calls << buf;
  }
  if (!ler || !calls) throw IoError("failed writing plot data");
}

}  // namespace toricnbm
