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

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "toricnbm/blossom.hpp"
#include "toricnbm/errors.hpp"
#include "toricnbm/noise.hpp"
#include "toricnbm/run_config.hpp"
#include "toricnbm/simulator.hpp"
#include "toricnbm/stats.hpp"
#include "toricnbm/toric_code.hpp"
#include "toricnbm/training.hpp"
#include "toricnbm/weights.hpp"

namespace py = pybind11;
using namespace toricnbm;

namespace {

// ShotDecoder keeps a pointer to its code, so the wrapper owns both.
class Decoder {
 public:
  Decoder(int d, const std::string& variant, double epsilon, std::optional<WeightSet> weights, int max_iterations,
          bool second_stage, bool posterior_weights)
      : code_(std::make_shared<ToricCode>(build_toric(d))) {
    const Variant v = variant_from_string(variant);
    BpConfig bp;
    bp.max_iterations = max_iterations > 0 ? max_iterations : 2 * d;
    std::optional<EdgeWeights> w;
    if (weights) w = resolve_weights(v, *weights, *code_);
    dec_ = std::make_unique<ShotDecoder>(*code_, v, epsilon, bp, std::move(w),
                                         DecodeOptions{second_stage, posterior_weights});
  }

  py::dict decode(const Syndrome& s) {
    const auto out = dec_->decode(s);
    py::dict r;
    r["correction"] = out.correction.to_string();
    r["converged"] = out.converged;
    r["second_stage"] = out.second_stage;
    r["iterations"] = out.bp_iterations;
    return r;
  }

  py::dict decode_hex(const std::string& hex) { return decode(bits_from_hex(hex, code_->standard.num_rows())); }

 private:
  std::shared_ptr<ToricCode> code_;
  std::unique_ptr<ShotDecoder> dec_;
};

py::dict stats_dict(const RunStats& s) {
  py::dict r;
  r["shots"] = s.shots;
  r["failures"] = s.failures;
  r["ler"] = s.ler;
  r["ci"] = py::make_tuple(s.ci.low, s.ci.high);
  r["stage2_calls"] = s.stage2_calls;
  r["stage2_fraction"] = s.stage2_fraction;
  r["mean_bp_iters"] = s.mean_bp_iters;
  r["max_bp_iters"] = s.max_bp_iters;
  r["bp_nonconverged"] = s.bp_nonconverged;
  return r;
}

std::string matrix_text(const SparseCheckMatrix& m) {
  std::ostringstream out;
  m.write_text(out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Toric-code belief-matching decoders";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<WeightFileError>(m, "WeightFileError", PyExc_ValueError);

  py::class_<PauliVector>(m, "PauliVector")
      .def(py::init(&PauliVector::from_string), py::arg("text"))
      .def("__len__", &PauliVector::size)
      .def("__str__", &PauliVector::to_string)
      .def("__repr__", [](const PauliVector& p) { return "PauliVector('" + p.to_string() + "')"; })
      .def("__mul__", [](const PauliVector& a, const PauliVector& b) { return a * b; })
      .def(py::self == py::self)
      .def_property_readonly("weight", &PauliVector::weight);

  py::class_<ToricCode>(m, "ToricCode")
      .def_readonly("distance", &ToricCode::distance)
      .def_readonly("num_qubits", &ToricCode::num_qubits)
      .def_property_readonly("logicals",
                             [](const ToricCode& c) {
                               std::vector<std::string> out;
                               for (const auto& l : c.logicals) out.push_back(l.to_string());
                               return out;
                             })
      .def("matrix_text", [](const ToricCode& c, const std::string& kind) {
        return matrix_text(c.matrix(matrix_kind_from_string(kind)));
      }, py::arg("kind") = "standard")
      .def("num_checks", [](const ToricCode& c, const std::string& kind) {
        return c.matrix(matrix_kind_from_string(kind)).num_rows();
      }, py::arg("kind") = "standard")
      .def("syndrome", [](const ToricCode& c, const PauliVector& e, const std::string& kind) {
        return syndrome(c.matrix(matrix_kind_from_string(kind)), e);
      }, py::arg("error"), py::arg("kind") = "standard")
      .def("is_logical_failure", [](const ToricCode& c, const PauliVector& e, const PauliVector& corr) {
        return is_logical_failure(e, corr, c);
      }, py::arg("error"), py::arg("correction"));

  m.def("build_toric", &build_toric, py::arg("d"));
  m.def("validate", [](const ToricCode& c) {
    const auto r = validate(c);
    return py::make_tuple(r.ok, r.first_violation);
  });

  m.def("sample_error", [](double epsilon, std::size_t num_qubits, std::uint64_t seed, std::uint64_t shot) {
    return sample_error(DepolarizingChannel(epsilon), num_qubits, ShotSeed{seed, shot});
  }, py::arg("epsilon"), py::arg("num_qubits"), py::arg("seed"), py::arg("shot"));

  py::class_<WeightSet>(m, "WeightSet")
      .def_property_readonly("kind", [](const WeightSet& w) { return to_string(w.kind); })
      .def_readonly("iterations", &WeightSet::iterations)
      .def_readonly("distance", &WeightSet::distance)
      .def_readonly("values", &WeightSet::values)
      .def_readonly("trained_epsilon", &WeightSet::trained_epsilon)
      .def_readonly("transferred_from", &WeightSet::transferred_from)
      .def_property_readonly("checksum", &weight_checksum)
      .def(py::self == py::self);

  m.def("load_weights", [](const std::string& p) { return load_weights(p); }, py::arg("path"));
  m.def("save_weights", [](const WeightSet& w, const std::string& p) { save_weights(w, p); }, py::arg("weights"),
        py::arg("path"));
  m.def("transfer", [](const WeightSet& w, int d) { return transfer(w, build_toric(d)); }, py::arg("weights"),
        py::arg("target_d"));
  m.def("unit_weights", [](const std::string& kind, int iterations, int d, const std::string& matrix) {
    return init_unit(weight_kind_from_string(kind), iterations, build_toric(d), matrix_kind_from_string(matrix));
  }, py::arg("kind") = "conv", py::arg("iterations") = 8, py::arg("d") = 4, py::arg("matrix") = "overcomplete");

  m.def("train", [](int d, const std::string& config_json) {
    const TrainConfig cfg = to_train_config(run_config_from_json(config_json));
    std::pair<WeightSet, LossReport> out;
    {
      py::gil_scoped_release release;
      out = train(build_toric(d), cfg);
    }
    return py::make_tuple(out.first, out.second.losses);
  }, py::arg("d"), py::arg("config_json") = "{}");

  py::class_<Decoder>(m, "Decoder")
      .def(py::init<int, const std::string&, double, std::optional<WeightSet>, int, bool, bool>(), py::arg("d"),
           py::arg("variant"), py::arg("epsilon"), py::arg("weights") = std::nullopt, py::arg("max_iterations") = 0,
           py::arg("second_stage") = true, py::arg("posterior_weights") = true)
      .def("decode", &Decoder::decode, py::arg("syndrome"))
      .def("decode_hex", &Decoder::decode_hex, py::arg("syndrome"));

  m.def("simulate", [](const std::string& config_json, std::optional<WeightSet> weights) {
    const RunConfig rc = run_config_from_json(config_json);
    SimConfig cfg = to_sim_config(rc);
    if (!weights && traits(cfg.variant).needs_weights && rc.weights) weights = load_weights(*rc.weights);
    RunStats s;
    {
      py::gil_scoped_release release;
      s = run_point(cfg, weights ? &*weights : nullptr);
    }
    return stats_dict(s);
  }, py::arg("config_json"), py::arg("weights") = std::nullopt);

  m.def("sweep", [](const std::string& config_json) {
    const SweepConfig cfg = to_sweep_config(run_config_from_json(config_json));
    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    {
      py::gil_scoped_release release;
      sweep(cfg, csv);
    }
    return csv.str();
  }, py::arg("config_json"));

  m.def("negbin_ci", [](std::uint64_t f, std::uint64_t n, double level) {
    const auto ci = negbin_ci(f, n, level);
    return py::make_tuple(ci.low, ci.high);
  }, py::arg("failures"), py::arg("shots"), py::arg("level") = 0.975);
  m.def("binomial_ci", [](std::uint64_t f, std::uint64_t n, double level) {
    const auto ci = binomial_ci(f, n, level);
    return py::make_tuple(ci.low, ci.high);
  }, py::arg("failures"), py::arg("shots"), py::arg("level") = 0.975);

  m.def("mwpm", [](const std::vector<std::vector<double>>& w) {
    DistanceTable t(w.size());
    for (std::size_t a = 0; a < w.size(); ++a) {
      if (w[a].size() != w.size()) throw ConfigError("mwpm: distance matrix must be square");
      for (std::size_t b = a + 1; b < w.size(); ++b) t.set(a, b, w[a][b]);
    }
    const auto r = mwpm(t);
    return py::make_tuple(r.pairs, r.total_weight);
  }, py::arg("distances"));
}
