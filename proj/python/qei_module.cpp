#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qei/cli.hpp"

namespace py = pybind11;

PYBIND11_MODULE(qei_py, m) {
  m.doc() =
      "Energy inequality verdicts, bounds, and witness curves for 1+1d "
      "integrable models.  Commands are pure functions of a RunConfig and "
      "render deterministic JSON/CSV, so results are reproducible byte for "
      "byte.";

  py::register_exception<qei::CliError>(m, "CliError");
  py::register_exception<qei::HypothesisError>(m, "HypothesisError");
  py::register_exception<qei::VerdictPreconditionError>(
      m, "VerdictPreconditionError");

  py::class_<qei::GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("lo", &qei::GridSpec::lo)
      .def_readwrite("hi", &qei::GridSpec::hi)
      .def_readwrite("n", &qei::GridSpec::n)
      .def("__eq__", [](const qei::GridSpec& a, const qei::GridSpec& b) {
        return a == b;
      });

  py::class_<qei::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("command", &qei::RunConfig::command)
      .def_readwrite("model", &qei::RunConfig::model)
      .def_readwrite("params", &qei::RunConfig::params)
      .def_readwrite("q", &qei::RunConfig::q)
      .def_readwrite("tau", &qei::RunConfig::tau)
      .def_readwrite("amplitude", &qei::RunConfig::amplitude)
      .def_readwrite("seed", &qei::RunConfig::seed)
      .def_readwrite("grid", &qei::RunConfig::grid)
      .def_readwrite("format", &qei::RunConfig::format)
      .def_readwrite("out", &qei::RunConfig::out)
      .def("validate", &qei::RunConfig::validate)
      .def("__eq__", [](const qei::RunConfig& a, const qei::RunConfig& b) {
        return a == b;
      });

  py::class_<qei::CliResult>(m, "RunResult")
      .def_readonly("exit_code", &qei::CliResult::exit_code)
      .def_readonly("output", &qei::CliResult::output);

  m.def("run", &qei::run_command, py::arg("config"),
        "Execute the configured command (charfct | verdict | bound | "
        "witness) and return its exit code and rendered output.");
  m.def("serialize_config", &qei::serialize_config, py::arg("config"),
        "Canonical JSON text for a RunConfig; parse_config inverts it.");
  m.def("parse_config", &qei::parse_config_json, py::arg("text"),
        "Parse and validate JSON configuration text.");
  m.def("format_number", &qei::format_number, py::arg("value"),
        "The 15-significant-digit rendering used for all numeric output.");
  m.def("w_plus", &qei::w_plus, py::arg("s"),
        "Antiderivative s*sqrt(s^2-1) + log(s + sqrt(s^2-1)) entering the "
        "even projector weight of the lower-bound constant.");
  m.def("w_minus", &qei::w_minus, py::arg("s"),
        "Antiderivative s*sqrt(s^2-1) - log(s + sqrt(s^2-1)) entering the "
        "odd projector weight of the lower-bound constant.");
}
