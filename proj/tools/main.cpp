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

// toricnbm command-line entry point. Every subcommand parses flags into a
// RunConfig, merges it over the optional --config file and calls the library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "toricnbm/errors.hpp"
#include "toricnbm/run_config.hpp"
#include "toricnbm/simulator.hpp"
#include "toricnbm/toric_code.hpp"
#include "toricnbm/training.hpp"
#include "toricnbm/weights.hpp"

namespace fs = std::filesystem;
using namespace toricnbm;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kInvariant = 3, kIo = 4 };

struct Command {
  CLI::App* app = nullptr;
  RunConfig flags;
  std::string config_file;
};

template <typename T>
void opt(Command& c, const std::string& name, std::optional<T> RunConfig::*field, const std::string& help) {
  RunConfig* flags = &c.flags;
  auto* o = c.app->add_option_function<T>(name, [flags, field](const T& v) { flags->*field = v; }, help);
  if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<int>> ||
                std::is_same_v<T, std::vector<std::string>>)
    o->delimiter(',');
}

void flag(Command& c, const std::string& name, std::optional<bool> RunConfig::*field, const std::string& help) {
  RunConfig* flags = &c.flags;
  c.app->add_flag_function(name, [flags, field](std::int64_t n) { flags->*field = n > 0; }, help);
}

Command& add_command(CLI::App& app, std::vector<std::unique_ptr<Command>>& cmds, const std::string& name,
                     const std::string& help) {
  auto cmd = std::make_unique<Command>();
  cmd->app = app.add_subcommand(name, help);
  cmd->app->add_option("--config", cmd->config_file, "JSON config file; flags override its values");
  cmds.push_back(std::move(cmd));
  return *cmds.back();
}

RunConfig effective(const Command& c) {
  RunConfig base = c.config_file.empty() ? RunConfig{} : load_run_config(c.config_file);
  return merge(base, c.flags);
}

template <typename T>
T require(const std::optional<T>& v, const char* key) {
  if (!v) throw ConfigError(std::string("missing required setting '") + key + "'");
  return *v;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, mode);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

void echo_config(const fs::path& artifact, const RunConfig& cfg) {
  auto f = open_out(artifact.string() + ".config.json");
  f << to_json(cfg) << '\n';
  if (!f) throw IoError("cannot write " + artifact.string() + ".config.json");
}

std::optional<WeightSet> weights_for(Variant v, const RunConfig& cfg) {
  if (!traits(v).needs_weights) return std::nullopt;
  return load_weights(require(cfg.weights, "weights"));
}

int run_codegen(const RunConfig& cfg) {
  const int d = require(cfg.d, "d");
  const ToricCode code = build_toric(d);
  if (const auto rep = validate(code); !rep.ok) throw InvariantViolation(rep.first_violation);
  const fs::path dir = cfg.out_dir.value_or(".");
  const std::string tag = "_d" + std::to_string(d);

  for (MatrixKind kind : {MatrixKind::Standard, MatrixKind::Overcomplete}) {
    const fs::path p = dir / (to_string(kind) + tag + ".txt");
    auto f = open_out(p);
    code.matrix(kind).write_text(f);
    echo_config(p, cfg);
  }

  const fs::path classes = dir / ("classes" + tag + ".csv");
  {
    auto f = open_out(classes);
    const TannerGraph g(code.overcomplete);
    const EdgeClassMap map = build_edge_classes(code, MatrixKind::Overcomplete);
    f << "check_row,qubit,class_id\n";
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      f << g.edge_check(e) << ',' << g.edge_qubit(e) << ',' << int(map.class_of_edge[e]) << '\n';
  }
  echo_config(classes, cfg);

  const fs::path logicals = dir / ("logicals" + tag + ".txt");
  {
    auto f = open_out(logicals);
    for (const auto& l : code.logicals) f << l.to_string() << '\n';
  }
  echo_config(logicals, cfg);
  return kOk;
}

int run_decode(const RunConfig& cfg) {
  const int d = require(cfg.d, "d");
  const Variant v = variant_from_string(cfg.variant.value_or("conv-rnbp+match"));
  const double eps = require(cfg.epsilon, "epsilon");
  const ToricCode code = build_toric(d);
  const Syndrome s = bits_from_hex(require(cfg.syndrome, "syndrome"), code.standard.num_rows());

  BpConfig bp;
  bp.max_iterations = cfg.max_iterations.value_or(0) > 0 ? *cfg.max_iterations : 2 * d;
  std::optional<EdgeWeights> w;
  if (auto ws = weights_for(v, cfg)) w = resolve_weights(v, *ws, code);

  ShotDecoder dec(code, v, eps, bp, std::move(w), to_decode_options(cfg));
  const auto out = dec.decode(s);
  std::cout << "correction " << out.correction.to_string() << '\n'
            << "converged " << (out.converged ? 1 : 0) << '\n'
            << "iterations " << out.bp_iterations << '\n'
            << "second_stage " << (out.second_stage ? 1 : 0) << '\n';
  return kOk;
}

int run_train(const RunConfig& cfg) {
  const TrainConfig tc = to_train_config(cfg);
  const fs::path out = require(cfg.out, "out");
  const ToricCode code = build_toric(cfg.d.value_or(4));

  auto write_report = [&](const LossReport& r) {
    auto f = open_out(out.string() + ".loss.csv");
    f << "# config " << to_json(cfg) << '\n' << "step,loss\n";
    char buf[64];
    for (std::size_t i = 0; i < r.losses.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.9e\n", i, r.losses[i]);
      f << buf;
    }
  };

  try {
    auto [ws, report] = train(code, tc);
    save_weights(ws, out);
    echo_config(out, cfg);
    write_report(report);
    std::cout << "weights " << out.string() << " checksum " << report.final_checksum << '\n';
  } catch (const TrainingDiverged& e) {
    write_report(e.report());
    throw InvariantViolation(e.what());
  }
  return kOk;
}

int run_transfer(const RunConfig& cfg) {
  const WeightSet ws = load_weights(require(cfg.weights, "weights"));
  const ToricCode target = build_toric(require(cfg.target_d, "target_d"));
  const fs::path out = require(cfg.out, "out");
  save_weights(transfer(ws, target), out);
  echo_config(out, cfg);
  return kOk;
}

int run_simulate(const RunConfig& cfg) {
  const SimConfig sc = to_sim_config(cfg);
  const auto ws = weights_for(sc.variant, cfg);
  SweepRow row;
  row.d = sc.distance;
  row.epsilon = sc.epsilon;
  row.variant = to_string(sc.variant);
  row.weights_file = sc.weights_file;
  row.seed = sc.seed;
  row.stats = run_point(sc, ws ? &*ws : nullptr);

  if (cfg.out) {
    const fs::path out = *cfg.out;
    auto f = open_out(out);
    f << "# config " << to_json(cfg) << '\n' << kCsvHeader << '\n' << format_csv_row(row) << '\n';
    echo_config(out, cfg);
  }
  std::cout << kCsvHeader << '\n' << format_csv_row(row) << '\n';
  return kOk;
}

std::vector<SweepRow> read_csv_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot read " + p.string());
  return read_sweep_csv(in);
}

int run_sweep(const RunConfig& cfg) {
  const SweepConfig sc = to_sweep_config(cfg);
  const fs::path out = require(cfg.out, "out");

  std::vector<SweepRow> done;
  const bool resume = fs::exists(out) && fs::file_size(out) > 0;
  if (resume) done = read_csv_file(out);
  auto f = open_out(out, resume ? std::ios::app : std::ios::out);
  if (!resume) f << "# config " << to_json(cfg) << '\n' << kCsvHeader << '\n';
  echo_config(out, cfg);

  const SweepOutcome res = sweep(sc, f, done, &std::cerr);
  if (!f) throw IoError("cannot write " + out.string());
  if (res.invariant_violations > 0) {
    std::cerr << "error: " << res.invariant_violations << " sweep point(s) violated an invariant\n";
    return kInvariant;
  }
  if (res.failed_points > 0) {
    std::cerr << "error: " << res.failed_points << " sweep point(s) failed\n";
    return kOther;
  }
  return kOk;
}

int run_report(const RunConfig& cfg) {
  const auto inputs = require(cfg.inputs, "inputs");
  if (inputs.empty()) throw ConfigError("report needs at least one input CSV");
  const fs::path dir = cfg.out_dir.value_or(".");

  // Later files win on duplicate points.
  std::map<std::tuple<int, double, std::string, std::string, std::uint64_t>, SweepRow> merged;
  for (const auto& p : inputs)
    for (auto& r : read_csv_file(p)) merged[{r.d, r.epsilon, r.variant, r.weights_file, r.seed}] = r;

  std::vector<SweepRow> rows;
  for (auto& [k, r] : merged) rows.push_back(r);

  const fs::path csv = dir / "merged.csv";
  {
    auto f = open_out(csv);
    f << "# config " << to_json(cfg) << '\n' << kCsvHeader << '\n';
    for (const auto& r : rows) f << format_csv_row(r) << '\n';
  }
  write_plot_data(rows, dir.string());
  for (const char* name : {"merged.csv", "ler_vs_epsilon.csv", "stage2_fraction_vs_epsilon.csv"})
    echo_config(dir / name, cfg);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric-code belief-matching decoder toolkit"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> cmds;

  auto& codegen = add_command(app, cmds, "codegen", "Write check matrices, edge classes and logicals");
  opt(codegen, "--d", &RunConfig::d, "Code distance");
  opt(codegen, "--out-dir", &RunConfig::out_dir, "Output directory (default .)");

  auto& decode = add_command(app, cmds, "decode", "Decode one syndrome");
  opt(decode, "--syndrome,-s", &RunConfig::syndrome, "Standard syndrome as a hex bitstring");
  opt(decode, "--d", &RunConfig::d, "Code distance");
  opt(decode, "--epsilon", &RunConfig::epsilon, "Depolarizing probability");
  opt(decode, "--variant", &RunConfig::variant, "Decoder variant (default conv-rnbp+match)");
  opt(decode, "--weights", &RunConfig::weights, "Weight file for weighted variants");
  opt(decode, "--max-iterations", &RunConfig::max_iterations, "BP iterations (default 2d)");
  opt(decode, "--second-stage", &RunConfig::second_stage, "matching | none");
  opt(decode, "--weights-source", &RunConfig::weights_source, "posterior | prior");

  auto& trainc = add_command(app, cmds, "train", "Train a weight set");
  opt(trainc, "--d", &RunConfig::d, "Training distance (default 4)");
  opt(trainc, "--kind", &RunConfig::kind, "conv | dense");
  opt(trainc, "--matrix", &RunConfig::matrix, "standard | overcomplete");
  opt(trainc, "--iterations", &RunConfig::iterations, "Unrolled BP iterations T");
  opt(trainc, "--batch-size", &RunConfig::batch_size, "Shots per step");
  opt(trainc, "--steps", &RunConfig::steps, "Optimizer steps");
  opt(trainc, "--learning-rate", &RunConfig::learning_rate, "Step size");
  opt(trainc, "--epsilon-train", &RunConfig::epsilon_train, "Training noise level(s), comma separated");
  opt(trainc, "--grad-clip", &RunConfig::grad_clip, "Global gradient-norm clip");
  opt(trainc, "--seed", &RunConfig::seed, "Master seed");
  flag(trainc, "--share-iterations", &RunConfig::share_iterations, "Tie all iteration layers");
  opt(trainc, "--optimizer", &RunConfig::optimizer, "adam | sgd");
  opt(trainc, "--loss", &RunConfig::loss, "cross-entropy | soft-syndrome");
  opt(trainc, "--workers", &RunConfig::workers, "Worker threads (default: available parallelism)");
  opt(trainc, "--out", &RunConfig::out, "Weight file to write");

  auto& transferc = add_command(app, cmds, "transfer", "Bind conv weights to another distance");
  opt(transferc, "--weights", &RunConfig::weights, "Conv weight file");
  opt(transferc, "--target-d", &RunConfig::target_d, "Target distance");
  opt(transferc, "--out", &RunConfig::out, "Weight file to write");

  auto& simulate = add_command(app, cmds, "simulate", "Monte Carlo for one point; prints one CSV row");
  opt(simulate, "--d", &RunConfig::d, "Code distance");
  opt(simulate, "--epsilon", &RunConfig::epsilon, "Depolarizing probability");
  opt(simulate, "--variant", &RunConfig::variant, "Decoder variant");
  opt(simulate, "--weights", &RunConfig::weights, "Weight file for weighted variants");
  opt(simulate, "--seed", &RunConfig::seed, "Master seed");
  opt(simulate, "--target-failures", &RunConfig::target_failures, "Stop after this many failures");
  opt(simulate, "--max-shots", &RunConfig::max_shots, "Shot cap");
  opt(simulate, "--max-iterations", &RunConfig::max_iterations, "BP iterations (default 2d)");
  opt(simulate, "--workers", &RunConfig::workers, "Worker threads (default: available parallelism)");
  opt(simulate, "--out", &RunConfig::out, "Also write the row to this CSV file");

  auto& sweepc = add_command(app, cmds, "sweep", "Monte Carlo over a (d, epsilon, variant) grid");
  opt(sweepc, "--distances", &RunConfig::distances, "Distances, comma separated");
  opt(sweepc, "--epsilons", &RunConfig::epsilons, "Noise levels, comma separated");
  opt(sweepc, "--variants", &RunConfig::variants, "Variants, comma separated");
  opt(sweepc, "--weights", &RunConfig::weights, "Weight file for weighted variants");
  opt(sweepc, "--seed", &RunConfig::seed, "Master seed");
  opt(sweepc, "--target-failures", &RunConfig::target_failures, "Stop after this many failures");
  opt(sweepc, "--max-shots", &RunConfig::max_shots, "Shot cap per point");
  opt(sweepc, "--max-iterations", &RunConfig::max_iterations, "BP iterations (default 2d)");
  opt(sweepc, "--workers", &RunConfig::workers, "Worker threads (default: available parallelism)");
  opt(sweepc, "--out", &RunConfig::out, "CSV file; existing rows are kept and skipped");

  auto& report = add_command(app, cmds, "report", "Merge sweep CSVs into plot data");
  opt(report, "--inputs", &RunConfig::inputs, "Sweep CSV files");
  opt(report, "--out-dir", &RunConfig::out_dir, "Output directory (default .)");

  const std::map<std::string, int (*)(const RunConfig&)> handlers{
      {"codegen", run_codegen},   {"decode", run_decode},     {"train", run_train}, {"transfer", run_transfer},
      {"simulate", run_simulate}, {"sweep", run_sweep},       {"report", run_report}};

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    for (const auto& c : cmds)
      if (c->app->parsed()) return handlers.at(c->app->get_name())(effective(*c));
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "error: invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const WeightFileError& e) {
    std::cerr << "error: weight file: " << e.what() << '\n';
    return e.reason() == WeightFileError::Reason::Integrity ? kIo : kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
