#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "compocheck/ingest.hpp"
#include "compocheck/rules.hpp"
#include "compocheck/simulator.hpp"
#include "compocheck/type_system.hpp"

namespace py = pybind11;

namespace {

using namespace compocheck;

[[noreturn]] void raise_parse_errors(const std::vector<ParseError>& errors) {
  std::string text;
  for (const auto& error : errors) {
    if (!text.empty()) text += "\n";
    text += to_string(error);
  }
  throw py::value_error(text);
}

Model unwrap(ParseResult result) {
  if (!result.ok()) raise_parse_errors(result.errors);
  return std::move(*result.model);
}

py::dict diagnostic_dict(const Diagnostic& d) {
  py::dict out;
  out["code"] = d.code;
  out["severity"] = std::string(to_string(d.severity));
  out["subject"] = d.subject;
  out["message"] = d.message;
  out["related"] = d.related;
  return out;
}

std::pair<const Class*, const Connector*> connector_at(const Model& model, const std::string& owner,
                                                       std::size_t index) {
  const Class* cls = model.find_class(owner);
  if (cls == nullptr) throw py::key_error("unknown class '" + owner + "'");
  if (index >= cls->connectors.size()) throw py::index_error("connector index out of range");
  return {cls, &cls->connectors[index]};
}

Model prepared(const Model& model) {
  auto diagnostics = validate_integrity(model);
  if (!diagnostics.empty()) {
    std::string text;
    for (const auto& d : diagnostics) text += (text.empty() ? "" : "\n") + render_text(d);
    throw py::value_error(text);
  }
  return synthesize_deleg_associations(model);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Composite-structure model checking and routing simulation";

  py::register_exception<SimError>(m, "SimError", PyExc_RuntimeError);

  py::class_<Model>(m, "Model")
      .def_property_readonly("classes",
                             [](const Model& model) {
                               std::vector<std::string> names;
                               for (const auto& cls : model.classes) names.push_back(cls.name);
                               return names;
                             })
      .def_property_readonly("interfaces",
                             [](const Model& model) {
                               std::vector<std::string> names;
                               for (const auto& iface : model.interfaces) names.push_back(iface.name);
                               return names;
                             })
      .def_property_readonly("associations",
                             [](const Model& model) {
                               std::vector<std::string> names;
                               for (const auto& assoc : model.associations) names.push_back(assoc.name);
                               return names;
                             })
      .def_property_readonly("root", [](const Model& model) { return model.root; })
      .def("to_json", &serialize_json)
      .def("__eq__", [](const Model& a, const Model& b) { return a == b; });

  m.def("parse_dsl", [](const std::string& text, const std::string& file) { return unwrap(parse_dsl(text, file)); },
        py::arg("text"), py::arg("file") = "<input>");
  m.def("parse_json", [](const std::string& text, const std::string& file) { return unwrap(parse_json(text, file)); },
        py::arg("text"), py::arg("file") = "<input>");
  m.def("serialize_json", &serialize_json, py::arg("model"));

  m.def(
      "validate_integrity",
      [](const Model& model) {
        py::list out;
        for (const auto& d : validate_integrity(model)) out.append(diagnostic_dict(d));
        return out;
      },
      py::arg("model"));
  m.def("synthesize", &synthesize_deleg_associations, py::arg("model"));
  m.def("prepare", &prepared, py::arg("model"), "Integrity check plus deleg synthesis; raises ValueError");

  m.def(
      "check_json",
      [](const Model& model, const std::vector<std::string>& downgrade) {
        CheckOptions options;
        options.downgrade.insert(downgrade.begin(), downgrade.end());
        return render_json(check_model(model, options));
      },
      py::arg("model"), py::arg("downgrade") = std::vector<std::string>{});

  m.def(
      "classify_link",
      [](const Model& model, const std::string& owner, std::size_t index) {
        const TypeSystem types(model);
        auto [cls, connector] = connector_at(model, owner, index);
        return std::string(to_string(types.classify_link(*cls, *connector)));
      },
      py::arg("model"), py::arg("owner"), py::arg("index"));
  m.def(
      "link_origin",
      [](const Model& model, const std::string& owner, std::size_t index) {
        const TypeSystem types(model);
        auto [cls, connector] = connector_at(model, owner, index);
        const auto origin = types.link_origin(*cls, *connector);
        return py::make_tuple(std::string(to_string(origin.kind)), origin.end);
      },
      py::arg("model"), py::arg("owner"), py::arg("index"));
  m.def(
      "transported_interfaces",
      [](const Model& model, const std::string& owner, std::size_t index) -> py::object {
        const TypeSystem types(model);
        auto [cls, connector] = connector_at(model, owner, index);
        const auto transported = types.transported_interfaces(*cls, *connector);
        if (!transported.computable) return py::none();
        return py::cast(std::vector<std::string>(transported.interfaces.begin(), transported.interfaces.end()));
      },
      py::arg("model"), py::arg("owner"), py::arg("index"));
  m.def(
      "class_interfaces",
      [](const Model& model, const std::string& name) {
        const TypeSystem types(model);
        const auto& set = types.class_interfaces(name);
        return std::vector<std::string>(set.begin(), set.end());
      },
      py::arg("model"), py::arg("name"));

  m.def(
      "simulate_json_lines",
      [](const Model& model, const std::string& root, const std::vector<std::vector<std::string>>& injections,
         bool full) {
        auto graph = instantiate(model, root);
        std::vector<Injection> suite;
        for (const auto& item : injections) {
          if (item.size() < 2 || item.size() > 3) throw py::value_error("injection must be (location, interface[, op])");
          suite.push_back({item[0], item[1], item.size() == 3 ? item[2] : ""});
        }
        if (injections.empty()) suite = full ? full_injections(graph) : default_injections(graph);
        for (const auto& injection : suite) inject(graph, injection.location, injection.interface, injection.operation);
        const auto trace = run_to_quiescence(graph);
        return render_trace_json_lines(trace, check_type_safety(trace, graph));
      },
      py::arg("model"), py::arg("root"), py::arg("injections") = std::vector<std::vector<std::string>>{},
      py::arg("full") = false);
}
