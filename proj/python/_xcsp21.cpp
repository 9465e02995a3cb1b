#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "json.hpp"
#include "xcsp/cli.hpp"
#include "xcsp/document.hpp"
#include "xcsp/semantics.hpp"
#include "xcsp/stats.hpp"
#include "xcsp/validate.hpp"

namespace py = pybind11;
using namespace xcsp;

namespace {

py::object cost_object(const Cost& c) {
  if (c.is_infinite()) return py::str("infinity");
  return py::int_(c.value());
}

py::dict diagnostic_dict(const Diagnostic& d) {
  py::dict out;
  out["severity"] = to_string(d.severity);
  out["code"] = d.code;
  out["path"] = d.location.path;
  out["offset"] = d.location.offset;
  out["message"] = d.message;
  return out;
}

py::list diagnostic_list(const std::vector<Diagnostic>& ds) {
  py::list out;
  for (const auto& d : ds) out.append(diagnostic_dict(d));
  return out;
}

Notation notation_arg(const std::string& name) {
  auto n = notation_from_string(name);
  if (!n) throw Error("UnknownNotation", "notation must be 'tagged' or 'abridged', got '" + name + "'");
  return *n;
}

SolveMode mode_arg(const std::string& name) {
  if (name == "first") return SolveMode::first;
  if (name == "all") return SolveMode::all;
  if (name == "count") return SolveMode::count;
  if (name == "min-cost" || name == "min_cost") return SolveMode::min_cost;
  throw Error("UnknownMode", "mode must be first, all, count or min-cost, got '" + name + "'");
}

py::dict assignment_dict(const Instance& inst, const Assignment& a) {
  py::dict out;
  for (const auto& v : inst.variables)
    if (auto it = a.find(v.name); it != a.end()) out[py::str(v.name)] = it->second;
  return out;
}

py::handle error_type;

}  // namespace

PYBIND11_MODULE(_xcsp21, m) {
  m.doc() = "Reader, validator, converter and reference evaluator for XCSP 2.1 instances";

  error_type = py::exception<Error>(m, "XcspError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const BudgetExceeded& e) {
      PyErr_SetObject(error_type.ptr(), py::make_tuple(e.code(), e.what(), e.nodes(), e.solutions()).ptr());
    } catch (const Error& e) {
      PyErr_SetObject(error_type.ptr(), py::make_tuple(e.code(), e.what()).ptr());
    }
  });

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("name", [](const Instance& i) { return i.presentation.name; })
      .def_property_readonly("type", [](const Instance& i) { return std::string(to_string(i.type())); })
      .def_property_readonly("variables",
                             [](const Instance& i) {
                               std::vector<std::string> names;
                               for (const auto& v : i.variables) names.push_back(v.name);
                               return names;
                             })
      .def_property_readonly("constraints",
                             [](const Instance& i) {
                               std::vector<std::string> names;
                               for (const auto& c : i.constraints) names.push_back(c.name);
                               return names;
                             })
      .def("domain", [](const Instance& i, const std::string& variable) {
        const DomainDef* d = i.domain_of(variable);
        if (!d) throw Error("UnknownVariable", "variable " + variable + " is not declared");
        return d->values;
      })
      .def("__eq__", [](const Instance& a, const Instance& b) { return model_equal(a, b); })
      .def("difference", [](const Instance& a, const Instance& b) { return first_difference(a, b); });

  m.def(
      "load",
      [](const std::string& text) {
        LoadResult r = load_instance(text);
        py::object inst = r.instance ? py::cast(std::move(*r.instance)) : py::none();
        return py::make_tuple(inst, diagnostic_list(r.diagnostics));
      },
      py::arg("text"), "Parse a document; returns (instance or None, diagnostics).");

  m.def(
      "write",
      [](const Instance& inst, const std::string& notation) { return write_instance(inst, notation_arg(notation)); },
      py::arg("instance"), py::arg("notation") = "abridged");

  m.def(
      "convert", [](const std::string& text, const std::string& notation) { return convert(text, notation_arg(notation)); },
      py::arg("text"), py::arg("notation"));

  m.def(
      "validate",
      [](const Instance& inst, bool strict) {
        const auto report = strict ? validate_competition(inst) : validate_structure(inst);
        py::dict out;
        out["passed"] = report.passed;
        out["strict"] = report.strict;
        out["diagnostics"] = diagnostic_list(report.diagnostics);
        return out;
      },
      py::arg("instance"), py::arg("strict") = false);

  m.def(
      "check",
      [](const Instance& inst, const std::map<std::string, Int>& values) {
        const Assignment a(values.begin(), values.end());
        const auto report = check_solution(inst, a);
        py::dict out;
        out["satisfied"] = report.satisfied;
        if (report.kind == InstanceType::wcsp) {
          out["total_cost"] = cost_object(report.total_cost);
          out["consistent"] = report.consistent;
        } else {
          out["violated"] = report.violated;
        }
        return out;
      },
      py::arg("instance"), py::arg("assignment"));

  m.def(
      "solve",
      [](const Instance& inst, const std::string& mode, std::uint64_t node_limit) {
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve_bruteforce(inst, {mode_arg(mode), node_limit});
        }
        py::dict out;
        out["count"] = r.count;
        out["nodes"] = r.nodes;
        py::list solutions;
        for (const auto& s : r.solutions) solutions.append(assignment_dict(inst, s));
        out["solutions"] = solutions;
        out["best_cost"] = r.best_cost ? cost_object(*r.best_cost) : py::none();
        out["best"] = r.best ? py::object(assignment_dict(inst, *r.best)) : py::none();
        return out;
      },
      py::arg("instance"), py::arg("mode") = "count", py::arg("node_limit") = default_node_limit);

  m.def(
      "eval_qcsp",
      [](const Instance& inst, std::uint64_t node_limit) {
        py::gil_scoped_release release;
        return eval_qcsp(inst, node_limit);
      },
      py::arg("instance"), py::arg("node_limit") = default_node_limit);

  m.def(
      "stats",
      [](const Instance& inst) {
        const auto json = py::module_::import("json");
        return json.attr("loads")(stats_json(compute_stats(inst)));
      },
      py::arg("instance"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::ostringstream out, err;
        std::istringstream in(stdin_text);
        const int code = run_cli(args, out, err, in);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "Run one command; returns (exit code, stdout, stderr).");
}
