#include "compocheck/cli.hpp"

#include <ostream>

#include "compocheck/rules.hpp"
#include "json.hpp"

namespace compocheck::cli {

namespace {

using nlohmann::ordered_json;

std::string_view severity_color(Severity severity) {
  switch (severity) {
    case Severity::Error:
      return "\x1b[31m";
    case Severity::Warning:
      return "\x1b[33m";
    case Severity::Note:
      return "\x1b[36m";
  }
  return "";
}

void print_diagnostic(std::ostream& os, const Diagnostic& diagnostic, bool color) {
  if (!color) {
    os << render_text(diagnostic) << "\n";
    return;
  }
  os << diagnostic.subject << ": " << severity_color(diagnostic.severity) << to_string(diagnostic.severity) << " "
     << diagnostic.code << "\x1b[0m: " << diagnostic.message;
  if (!diagnostic.related.empty()) {
    os << " [";
    for (std::size_t i = 0; i < diagnostic.related.size(); ++i) os << (i ? ", " : "") << diagnostic.related[i];
    os << "]";
  }
  os << "\n";
}

// Loads and prepares the model, reporting failures. Returns nullopt on error.
std::optional<Model> load(const CliConfig& config, std::ostream& out, std::ostream& err) {
  auto prepared = prepare_file(config.input_path, config.format);
  if (prepared.ok()) return std::move(prepared.model);
  for (const auto& error : prepared.parse_errors) err << to_string(error) << "\n";
  if (!prepared.integrity.empty()) {
    if (config.output == OutputFormat::Json) {
      CheckReport report;
      report.diagnostics = prepared.integrity;
      for (const auto& diagnostic : report.diagnostics) ++report.stats[diagnostic.code];
      report.passed = false;
      out << render_json(report);
    }
    for (const auto& diagnostic : prepared.integrity) print_diagnostic(err, diagnostic, config.color);
  }
  return std::nullopt;
}

ordered_json set_json(const InterfaceSet& set) {
  auto out = ordered_json::array();
  for (const auto& name : set) out.push_back(name);
  return out;
}

ordered_json explain_connector(const TypeSystem& types, const ConnectorRef& ref) {
  const auto& connector = ref.connector();
  const auto kind = types.classify_link(*ref.owner, connector);
  const auto origin = types.link_origin(*ref.owner, connector);
  const auto transported = types.transported_interfaces(*ref.owner, connector);
  ordered_json doc;
  doc["element"] = connector_path(*ref.owner, ref.index);
  doc["type"] = "connector";
  doc["ends"] = {to_string(connector.end1), to_string(connector.end2)};
  doc["kind"] = to_string(kind);
  doc["origin"] = to_string(origin.kind);
  if (origin.end != 0) doc["originEnd"] = to_string(origin.end == 1 ? connector.end1 : connector.end2);
  doc["association"] = connector.association ? ordered_json(*connector.association) : ordered_json(nullptr);
  doc["computable"] = transported.computable;
  doc["transports"] = set_json(transported.interfaces);
  return doc;
}

std::optional<PortOccurrence> occurrence_of(const TypeSystem& types, const PortRef& ref) {
  for (auto& occurrence : types.port_occurrences()) {
    if (occurrence.context == ref.context && occurrence.part == ref.part && occurrence.port == ref.port) {
      return occurrence;
    }
  }
  return std::nullopt;
}

ordered_json explain_port(const TypeSystem& types, const PortRef& ref) {
  ordered_json doc;
  std::string path = ref.context->name + ".";
  if (ref.part != nullptr) path += ref.part->name + ".";
  path += ref.port->name;
  doc["element"] = path;
  doc["type"] = "port";
  doc["direction"] = ref.port->reversed ? "required" : "provided";
  doc["contract"] = ref.port->contract;
  const auto expected = types.port_interfaces(*ref.port);
  doc["interfaces"] = set_json(expected);
  doc["outgoing"] = ordered_json::array();

  const auto occurrence = occurrence_of(types, ref);
  InterfaceSet carried;
  std::vector<InterfaceSet> untyped;
  if (occurrence) {
    for (auto index : occurrence->outgoing) {
      const auto& connector = ref.context->connectors[index];
      const auto transported = types.transported_interfaces(*ref.context, connector);
      carried.insert(transported.interfaces.begin(), transported.interfaces.end());
      if (!connector.association && transported.computable) untyped.push_back(transported.interfaces);
      const auto origin = types.link_origin(*ref.context, connector);
      ordered_json link;
      link["connector"] = connector_path(*ref.context, index);
      link["to"] = to_string(origin.end == 1 ? connector.end2 : connector.end1);
      link["association"] = connector.association ? ordered_json(*connector.association) : ordered_json(nullptr);
      link["transports"] = set_json(transported.interfaces);
      doc["outgoing"].push_back(std::move(link));
    }
  }
  const bool starting = occurrence && !occurrence->outgoing.empty();
  doc["union"] = set_json(carried);
  doc["disjoint"] = pairwise_disjoint(untyped);
  doc["complete"] = !starting || carried == expected;
  return doc;
}

ordered_json explain_element(const TypeSystem& types, const Element& element) {
  ordered_json doc;
  if (const auto* ref = std::get_if<ConnectorRef>(&element)) return explain_connector(types, *ref);
  if (const auto* ref = std::get_if<PortRef>(&element)) return explain_port(types, *ref);
  if (const auto* ref = std::get_if<PartRef>(&element)) {
    doc["element"] = ref->owner->name + "." + ref->part->name;
    doc["type"] = "part";
    doc["partType"] = ref->part->type;
    doc["multiplicity"] = ref->part->multiplicity;
    doc["interfaces"] = set_json(types.class_interfaces(ref->part->type));
    return doc;
  }
  if (const auto* cls = std::get_if<const Class*>(&element)) {
    doc["element"] = (*cls)->name;
    doc["type"] = "class";
    doc["kind"] = to_string((*cls)->kind);
    doc["parents"] = set_json(types.parents_of((*cls)->name));
    doc["interfaces"] = set_json(types.class_interfaces((*cls)->name));
    doc["composite"] = (*cls)->is_composite();
    return doc;
  }
  if (const auto* iface = std::get_if<const Interface*>(&element)) {
    doc["element"] = (*iface)->name;
    doc["type"] = (*iface)->is_group ? "interfaceGroup" : "interface";
    doc["parents"] = set_json(types.parents_of((*iface)->name));
    doc["interfaces"] = set_json(types.interface_closure((*iface)->name));
    return doc;
  }
  const auto* assoc = std::get<const Association*>(element);
  const auto view = types.view_association(*assoc);
  doc["element"] = assoc->name;
  doc["type"] = "association";
  doc["source"] = view.source->type;
  doc["target"] = view.target->type;
  doc["navigability"] = view.navigable_nowhere ? "none" : view.bidirectional ? "both" : "one";
  doc["synthesized"] = assoc->synthesized;
  return doc;
}

std::string join(const ordered_json& array) {
  std::string text = "{";
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (i != 0) text += ", ";
    text += array[i].get<std::string>();
  }
  return text + "}";
}

void print_explanation_text(std::ostream& os, const ordered_json& doc) {
  const auto type = doc["type"].get<std::string>();
  os << doc["element"].get<std::string>() << " (" << type << ")\n";
  if (type == "connector") {
    os << "  ends: " << doc["ends"][0].get<std::string>() << ", " << doc["ends"][1].get<std::string>() << "\n";
    os << "  kind: " << doc["kind"].get<std::string>() << "\n";
    os << "  origin: " << doc["origin"].get<std::string>();
    if (doc.contains("originEnd")) os << " (" << doc["originEnd"].get<std::string>() << ")";
    os << "\n  association: " << (doc["association"].is_null() ? "none" : doc["association"].get<std::string>())
       << "\n";
    if (doc["computable"].get<bool>()) {
      os << "  transports: " << join(doc["transports"]) << "\n";
    } else {
      os << "  transports: not computable (link starts at a part)\n";
    }
    return;
  }
  if (type == "port") {
    os << "  " << doc["direction"].get<std::string>() << ", contract " << doc["contract"].get<std::string>() << "\n";
    os << "  interfaces: " << join(doc["interfaces"]) << "\n";
    if (doc["outgoing"].empty()) {
      os << "  outgoing links: none\n";
      return;
    }
    os << "  outgoing links:\n";
    for (const auto& link : doc["outgoing"]) {
      os << "    " << link["connector"].get<std::string>() << " -> " << link["to"].get<std::string>();
      if (!link["association"].is_null()) os << " via " << link["association"].get<std::string>();
      os << ": " << join(link["transports"]) << "\n";
    }
    os << "  union: " << join(doc["union"]) << "\n";
    os << "  untyped links disjoint: " << (doc["disjoint"].get<bool>() ? "yes" : "no") << "\n";
    os << "  complete: " << (doc["complete"].get<bool>() ? "yes" : "no") << "\n";
    return;
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "element" || key == "type") continue;
    os << "  " << key << ": ";
    if (value.is_array()) {
      os << join(value);
    } else if (value.is_string()) {
      os << value.get<std::string>();
    } else {
      os << value.dump();
    }
    os << "\n";
  }
}

}  // namespace

std::set<std::string> parse_code_list(std::string_view text) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace(item);
    start = end + 1;
  }
  return out;
}

std::optional<Injection> parse_injection(std::string_view text) {
  const auto first = text.find(':');
  if (first == std::string_view::npos || first == 0) return std::nullopt;
  Injection injection;
  injection.location = std::string(text.substr(0, first));
  auto rest = text.substr(first + 1);
  const auto second = rest.find(':');
  injection.interface = std::string(rest.substr(0, second));
  if (second != std::string_view::npos) injection.operation = std::string(rest.substr(second + 1));
  if (injection.interface.empty()) return std::nullopt;
  if (second != std::string_view::npos && injection.operation.empty()) return std::nullopt;
  return injection;
}

int cmd_check(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto model = load(config, out, err);
  if (!model) return kExitInputError;
  const auto report = check_model(*model, CheckOptions{config.downgrade});
  if (config.output == OutputFormat::Json) {
    out << render_json(report);
  } else {
    const auto text = render_text(report);
    if (!config.color) {
      out << text;
    } else {
      for (const auto& diagnostic : report.diagnostics) print_diagnostic(out, diagnostic, true);
      out << text.substr(text.rfind('\n', text.size() - 2) + 1);
    }
  }
  return report.passed ? kExitOk : kExitFindings;
}

int cmd_explain(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto model = load(config, out, err);
  if (!model) return kExitInputError;
  const TypeSystem types(*model);
  try {
    const auto doc = explain_element(types, resolve(*model, config.element));
    if (config.output == OutputFormat::Json) {
      out << doc.dump(2) << "\n";
    } else {
      print_explanation_text(out, doc);
    }
  } catch (const ModelError& e) {
    for (const auto& diagnostic : e.diagnostics()) print_diagnostic(err, diagnostic, config.color);
    return kExitInputError;
  }
  return kExitOk;
}

int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto model = load(config, out, err);
  if (!model) return kExitInputError;
  const auto root = config.root ? config.root : model->root;
  if (!root) {
    err << "error: no root class; pass --root or declare one in the model\n";
    return kExitInputError;
  }
  // Rule errors do not block simulation; routing decides the exit code.
  const auto report = check_model(*model);
  if (!report.passed) {
    err << "warning: model has rule errors; simulating anyway\n";
    for (const auto& diagnostic : report.diagnostics) {
      if (diagnostic.severity == Severity::Error) print_diagnostic(err, diagnostic, config.color);
    }
  }
  try {
    auto graph = instantiate(*model, *root);
    std::vector<Injection> injections;
    for (const auto& text : config.injections) {
      auto injection = parse_injection(text);
      if (!injection) {
        err << "error: malformed injection '" << text << "' (expected LOC:IFACE[:OP])\n";
        return kExitInputError;
      }
      injections.push_back(std::move(*injection));
    }
    if (config.injections.empty()) injections = default_injections(graph);
    for (const auto& injection : injections) {
      inject(graph, injection.location, injection.interface, injection.operation);
    }
    const auto trace = run_to_quiescence(graph);
    const auto safety = check_type_safety(trace, graph);
    if (config.output == OutputFormat::Json) {
      out << render_trace_json_lines(trace, safety);
    } else {
      out << render_trace_text(trace, safety);
    }
    for (const auto& diagnostic : trace.diagnostics) print_diagnostic(err, diagnostic, config.color);
    return safety.safe ? kExitOk : kExitFindings;
  } catch (const SimError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::Check:
      return cmd_check(config, out, err);
    case Command::Explain:
      return cmd_explain(config, out, err);
    case Command::Simulate:
      return cmd_simulate(config, out, err);
  }
  return kExitInputError;
}

}  // namespace compocheck::cli
