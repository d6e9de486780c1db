#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "daycare/generator.hpp"
#include "daycare/io.hpp"
#include "daycare/ipmodel.hpp"
#include "daycare/oracle.hpp"
#include "daycare/properties.hpp"
#include "daycare/solver.hpp"

namespace py = pybind11;
using namespace daycare;

// Documents cross the boundary as JSON text; the Python package decodes them.
namespace {

Instance instance_from(const std::string& text) { return validate_instance(raw_instance_from_json(Json::parse(text))); }

std::string solve_json(const std::string& instance, int level, double time_limit, std::int64_t node_limit) {
  const Instance inst = instance_from(instance);
  SolverConfig cfg;
  cfg.time_limit_seconds = time_limit;
  cfg.node_limit = node_limit;
  cfg.validate();
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = solve(build_model(inst, {level}), cfg);
  }
  Json doc = solve_report_to_json(inst, level, r);
  doc["matching"] = r.matching ? matching_to_json(inst, *r.matching) : Json(nullptr);
  return doc.dump();
}

std::string check_json(const std::string& instance, const std::string& matching) {
  const Instance inst = instance_from(instance);
  return report_to_json(inst, build_report(inst, matching_from_json(inst, Json::parse(matching)))).dump();
}

std::string oracle_json(const std::string& instance, std::uint64_t caps) {
  const Instance inst = instance_from(instance);
  OracleCaps c;
  c.max_search_space = caps;
  const EnumerationReport report = stable_set(inst, c);
  Json doc = enumeration_to_json(inst, report);
  doc["text"] = render_enumeration(inst, report);
  return doc.dump();
}

std::string generate_json(const std::string& name, std::uint64_t seed, std::optional<int> children,
                          std::optional<int> daycares) {
  GenParams p = preset(name);
  p.seed = seed;
  if (children) p.n_children = *children;
  if (daycares) p.n_daycares = *daycares;
  return raw_instance_to_json(generate_raw(p)).dump();
}

std::string stats_json(const std::string& instance, int level) {
  return stats_to_json(model_stats(build_model(instance_from(instance), {level}))).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Daycare matching core (JSON in, JSON out)";
  py::register_exception<MatchError>(m, "MatchError", PyExc_ValueError);
  m.def("solve", &solve_json, py::arg("instance"), py::arg("level") = 3, py::arg("time_limit") = 120.0,
        py::arg("node_limit") = SolverConfig{}.node_limit);
  m.def("check", &check_json, py::arg("instance"), py::arg("matching"));
  m.def("oracle", &oracle_json, py::arg("instance"), py::arg("caps") = OracleCaps{}.max_search_space);
  m.def("generate", &generate_json, py::arg("preset") = "tiny", py::arg("seed") = 0, py::arg("children") = py::none(),
        py::arg("daycares") = py::none());
  m.def("model_stats", &stats_json, py::arg("instance"), py::arg("level") = 3);
  m.def("export_lp", [](const std::string& instance, int level) { return export_lp(build_model(instance_from(instance), {level})); },
        py::arg("instance"), py::arg("level") = 3);
  m.def("preset_names", &preset_names);
}
