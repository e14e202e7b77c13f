#include "fldx/driver/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fldx;

namespace {

std::string analyze_json(const std::string &source, const std::vector<std::string> &inputs,
                         const std::string &scenario, const std::string &format, std::size_t max_noise,
                         int path_budget, int subdiv, const std::string &threshold, const std::string &entry,
                         const std::string &file) {
  AnalysisConfig cfg;
  if (!format.empty())
    cfg.exec.format = parse_format(format);
  cfg.exec.max_syms = max_noise;
  cfg.exec.path_budget = path_budget;
  cfg.exec.entry = entry;
  try {
    cfg.exec.threshold = Rational::parse(threshold);
  } catch (const std::exception &) {
    throw UsageError("bad threshold '" + threshold + "'");
  }
  cfg.subdiv = subdiv;
  if (!scenario.empty())
    cfg.inputs = pick_scenario(source, scenario).inputs;
  for (const auto &i : inputs) {
    auto [name, spec] = parse_input(i);
    cfg.inputs.insert_or_assign(name, spec);
  }
  cfg.validate();
  std::string out;
  {
    py::gil_scoped_release release;
    Analysis a = analyze(source, cfg);
    out = report_json(a, ReportMeta{file, scenario, cfg}).dump();
  }
  return out;
}

} // namespace

PYBIND11_MODULE(_fldx, m) {
  m.doc() = "Floating-point accuracy and robustness analysis of a C subset";
  m.attr("REPORT_SCHEMA") = kReportSchema;

  static py::exception<StageError> stage_error(m, "StageError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const StageError &e) {
      py::tuple args = py::make_tuple(to_string(e.stage()), e.what());
      PyErr_SetObject(stage_error.ptr(), args.ptr());
    } catch (const UsageError &e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("analyze_json", &analyze_json, py::arg("source"), py::arg("inputs") = std::vector<std::string>{},
        py::arg("scenario") = "", py::arg("format") = "", py::arg("max_noise") = 64, py::arg("path_budget") = 256,
        py::arg("subdiv") = 1, py::arg("threshold") = "0.05", py::arg("entry") = "main",
        py::arg("file") = "<string>", "Runs the whole pipeline and returns the JSON report.");
  m.def(
      "instrument", [](const std::string &source) { return prepare(source).instrumented; }, py::arg("source"),
      "The program with split/merge sections inserted.");
  m.def(
      "typecheck", [](const std::string &source) { return typing_text(typecheck_source(source)); },
      py::arg("source"), "The typing of every annotation, as text.");
}
