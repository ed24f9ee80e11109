// Copyright 2026 The Authors.
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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "buyback/harness.h"
#include "buyback/io.h"
#include "buyback/lower_bound.h"
#include "buyback/matroid.h"
#include "buyback/online.h"
#include "buyback/random.h"
#include "buyback/ratio.h"
#include "buyback/verification.h"

namespace py = pybind11;
using namespace buyback;

namespace {

std::vector<double> marks_of(const MarkStrategy& s) {
  return {s.marks().begin(), s.marks().end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online matroid selling with buyback: oracles, algorithms, ratios, lower bounds.";

  py::register_exception<InputFormatError>(m, "InputFormatError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<MatroidKind>(m, "MatroidKind")
      .value("uniform", MatroidKind::kUniform)
      .value("partition", MatroidKind::kPartition)
      .value("graphic", MatroidKind::kGraphic)
      .value("explicit", MatroidKind::kExplicit);

  py::class_<MatroidOracle>(m, "MatroidOracle")
      .def_static("uniform", &MatroidOracle::uniform, py::arg("ground_size"), py::arg("rank"))
      .def_static("partition", &MatroidOracle::partition, py::arg("part_of"), py::arg("capacity"))
      .def_static("graphic", &MatroidOracle::graphic, py::arg("edges"))
      .def_static("explicit_family", &MatroidOracle::explicit_family, py::arg("ground_size"),
                  py::arg("independent_sets"))
      .def_property_readonly("kind", &MatroidOracle::kind)
      .def_property_readonly("ground_size", &MatroidOracle::ground_size)
      .def("is_independent",
           [](const MatroidOracle& o, const ElementSet& s) { return o.is_independent(s); })
      .def("check_axioms", [](const MatroidOracle& o) { return check_matroid_axioms(o); });

  py::class_<Instance>(m, "Instance")
      .def(py::init<std::vector<double>, MatroidOracle>(), py::arg("values"), py::arg("oracle"))
      .def_property_readonly("values", [](const Instance& i) {
        return std::vector<double>(i.values().begin(), i.values().end());
      })
      .def_property_readonly("oracle", &Instance::oracle)
      .def("__len__", &Instance::size)
      .def("to_json", &instance_to_json);

  m.def("parse_instance", [](const std::string& text) { return parse_instance(text); });
  m.def("load_instance", [](const std::string& path) { return load_instance(path); });

  py::class_<Basis>(m, "Basis")
      .def_readonly("elements", &Basis::elements)
      .def_readonly("value", &Basis::value);
  m.def("max_weight_basis", py::overload_cast<const Instance&>(&max_weight_basis));

  py::enum_<Decision>(m, "Decision")
      .value("sell", Decision::kSell)
      .value("swap", Decision::kSwap)
      .value("reject", Decision::kReject);

  py::class_<TraceEvent>(m, "TraceEvent")
      .def_readonly("element", &TraceEvent::element)
      .def_readonly("decision", &TraceEvent::decision)
      .def_readonly("buyback", &TraceEvent::buyback);

  py::class_<Trace>(m, "Trace")
      .def_readonly("events", &Trace::events)
      .def_readonly("final_set", &Trace::final_set)
      .def_readonly("buyback_set", &Trace::buyback_set)
      .def("to_jsonl", &trace_to_jsonl)
      .def("__eq__", [](const Trace& a, const Trace& b) { return a == b; });

  py::class_<PayoffLedger>(m, "PayoffLedger")
      .def_readonly("f", &PayoffLedger::f)
      .def_readonly("gross", &PayoffLedger::gross)
      .def_readonly("penalty", &PayoffLedger::penalty)
      .def_readonly("net", &PayoffLedger::net);

  m.def("payoff", [](const Trace& t, const Instance& i, double f) {
    return payoff(t, i.values(), f);
  });
  m.def("validate_trace", [](const Trace& t, const Instance& i) {
    return validate_trace(t, i.oracle());
  });
  m.def("run_gma", &run_gma, py::arg("instance"), py::arg("f"));
  m.def(
      "run_randalg",
      [](const Instance& inst, double f, std::optional<double> r, std::uint64_t seed) {
        Rng rng(seed);
        return run_randalg(inst, f, r, rng);
      },
      py::arg("instance"), py::arg("f"), py::arg("r") = py::none(), py::arg("seed") = 0);
  m.def(
      "round_value", [](double v, double r, double u) { return round_value(v, {r, u}); },
      py::arg("v"), py::arg("r"), py::arg("u"));

  m.def("lambert_w_lower", &lambert_w_lower);
  m.def("competitive_ratio", &competitive_ratio, py::arg("f"));
  m.def("ratio_formula", &ratio_formula, py::arg("r"), py::arg("f"));
  m.def("gma_ratio_bound", &gma_ratio_bound, py::arg("r"), py::arg("f"));
  m.def("optimal_r", &optimal_r, py::arg("f"));

  py::class_<RatioConstants>(m, "RatioConstants")
      .def_readonly("f", &RatioConstants::f)
      .def_readonly("c_star", &RatioConstants::c_star)
      .def_readonly("r_star", &RatioConstants::r_star)
      .def_readonly("degenerate", &RatioConstants::degenerate);
  m.def("ratio_constants", &ratio_constants, py::arg("f"));

  m.def(
      "expected_payoff",
      [](std::vector<double> marks, double f, double y) {
        return expected_payoff(MarkStrategy(std::move(marks)), f, StopDistribution(y));
      },
      py::arg("marks"), py::arg("f"), py::arg("y"));
  m.def(
      "realized_payoff",
      [](std::vector<double> marks, double f, double x) {
        return realized_payoff(MarkStrategy(std::move(marks)), f, x);
      },
      py::arg("marks"), py::arg("f"), py::arg("x"));
  m.def("geometric_payoff", &geometric_payoff, py::arg("ratio"), py::arg("count"), py::arg("f"));

  py::class_<GeometricBound>(m, "GeometricBound")
      .def_property_readonly("ratio", [](const GeometricBound& b) { return b.strategy.ratio; })
      .def_property_readonly("count", [](const GeometricBound& b) { return b.strategy.count; })
      .def_readonly("payoff", &GeometricBound::payoff)
      .def_readonly("prophet", &GeometricBound::prophet)
      .def_readonly("bound", &GeometricBound::bound);
  m.def("best_geometric", &best_geometric, py::arg("f"), py::arg("y"), py::arg("k_max") = 10000);
  m.def(
      "brute_force_optimal_marks",
      [](double f, double y, std::size_t k) { return marks_of(brute_force_optimal_marks(f, y, k)); },
      py::arg("f"), py::arg("y"), py::arg("k"));
  m.def("discretize_to_bids", &discretize_to_bids, py::arg("delta"), py::arg("y"));

  m.def(
      "generate",
      [](const std::string& spec, std::uint64_t seed) {
        return generate(parse_generator(spec, seed));
      },
      py::arg("spec"), py::arg("seed") = 0);

  py::class_<RatioReport>(m, "RatioReport")
      .def_readonly("algorithm", &RatioReport::algorithm)
      .def_readonly("instance", &RatioReport::instance)
      .def_readonly("f", &RatioReport::f)
      .def_readonly("trials", &RatioReport::trials)
      .def_readonly("mean_net", &RatioReport::mean_net)
      .def_readonly("stderr_net", &RatioReport::stderr_net)
      .def_readonly("opt", &RatioReport::opt)
      .def_readonly("empirical_ratio", &RatioReport::empirical_ratio)
      .def_readonly("theoretical_bound", &RatioReport::theoretical_bound)
      .def_readonly("seed", &RatioReport::seed);
  m.def(
      "estimate_expected_payoff",
      [](const std::string& algorithm, const Instance& inst, double f, std::size_t trials,
         std::uint64_t seed, std::optional<double> r) {
        py::gil_scoped_release release;
        return estimate_expected_payoff(parse_algorithm(algorithm), inst, f, trials, seed, r);
      },
      py::arg("algorithm"), py::arg("instance"), py::arg("f"), py::arg("trials"),
      py::arg("seed") = 0, py::arg("r") = py::none());

  py::class_<PrefixPoint>(m, "PrefixPoint")
      .def_readonly("prefix", &PrefixPoint::prefix)
      .def_readonly("opt", &PrefixPoint::opt)
      .def_readonly("mean_net", &PrefixPoint::mean_net)
      .def_readonly("stderr_net", &PrefixPoint::stderr_net)
      .def_readonly("ratio", &PrefixPoint::ratio)
      .def_readonly("ratio_stderr", &PrefixPoint::ratio_stderr);
  m.def(
      "worst_prefix_ratio",
      [](const std::string& algorithm, const Instance& inst, double f, std::size_t trials,
         std::uint64_t seed, std::optional<double> r) {
        py::gil_scoped_release release;
        const PrefixProfile p =
            worst_prefix_ratio(parse_algorithm(algorithm), inst, f, trials, seed, r);
        return std::make_pair(p.points, p.worst);
      },
      py::arg("algorithm"), py::arg("instance"), py::arg("f"), py::arg("trials"),
      py::arg("seed") = 0, py::arg("r") = py::none());

  py::class_<SuiteResult>(m, "SuiteResult")
      .def_readonly("name", &SuiteResult::name)
      .def_readonly("checks", &SuiteResult::checks)
      .def_readonly("failures", &SuiteResult::failures)
      .def_readonly("first_failure", &SuiteResult::first_failure)
      .def_readonly("max_deviation", &SuiteResult::max_deviation)
      .def_property_readonly("passed", &SuiteResult::passed);
  m.def(
      "run_all_suites",
      [](std::uint64_t seed) {
        VerifyOptions options;
        options.seed = seed;
        return run_all_suites(options);
      },
      py::arg("seed") = 20240601);
}
