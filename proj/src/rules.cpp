#include "compocheck/rules.hpp"

#include <algorithm>
#include <optional>

#include "json.hpp"

namespace compocheck {

namespace {

Diagnostic error(std::string code, std::string subject, std::string message, std::vector<std::string> related = {}) {
  return Diagnostic{std::move(code), Severity::Error, std::move(subject), std::move(message), std::move(related)};
}

std::string end_path(const Class& owner, const EndRef& end) {
  std::string path = owner.name;
  if (end.part) path += "." + *end.part;
  if (end.port) path += "." + *end.port;
  return path;
}

std::string quoted(const EndRef& end) { return "'" + to_string(end) + "'"; }

std::string_view to_string(AssociationKind kind) {
  switch (kind) {
    case AssociationKind::ClassClass:
      return "class-class";
    case AssociationKind::ClassInterface:
      return "class-interface";
    case AssociationKind::InterfaceClass:
      return "interface-class";
    case AssociationKind::InterfaceInterface:
      return "interface-interface";
    case AssociationKind::Unresolved:
      break;
  }
  return "unresolved";
}

// A non-forbidden connector with its ends oriented by the link direction.
// Part-part links have no inherent direction; end1 is taken as the start.
struct Link {
  const Class* owner = nullptr;
  std::size_t index = 0;
  const Connector* connector = nullptr;
  LinkKind kind = LinkKind::Forbidden;
  LinkOrigin origin;
  ResolvedEnd start;
  ResolvedEnd far;
  const EndRef* start_ref = nullptr;
  const EndRef* far_ref = nullptr;
  const Association* association = nullptr;

  std::string path() const { return connector_path(*owner, index); }
  std::vector<std::string> related() const { return {end_path(*owner, *start_ref), end_path(*owner, *far_ref)}; }
  bool part_part() const { return kind == LinkKind::AssemblyPartPart; }
};

std::vector<Link> directed_links(const TypeSystem& types) {
  std::vector<Link> out;
  for (const auto& cls : types.model().classes) {
    for (std::size_t i = 0; i < cls.connectors.size(); ++i) {
      const auto& connector = cls.connectors[i];
      Link link;
      link.owner = &cls;
      link.index = i;
      link.connector = &connector;
      link.kind = types.classify_link(cls, connector);
      if (link.kind == LinkKind::Forbidden) continue;
      link.origin = types.link_origin(cls, connector);
      const bool first = link.origin.end != 2;
      link.start_ref = first ? &connector.end1 : &connector.end2;
      link.far_ref = first ? &connector.end2 : &connector.end1;
      link.start = types.resolve_end(cls, *link.start_ref);
      link.far = types.resolve_end(cls, *link.far_ref);
      link.association = types.association_of(connector);
      out.push_back(link);
    }
  }
  return out;
}

bool end_fits(const TypeSystem& types, const ResolvedEnd& end, const std::string& type) {
  if (end.is_port()) return types.port_compatible(*end.port, type);
  return types.classifier_compatible(end.part->type, type);
}

std::string describe_end(const ResolvedEnd& end, const EndRef& ref) {
  if (end.is_port()) return "port '" + to_string(ref) + "'";
  return "part '" + to_string(ref) + "' of type '" + end.part->type + "'";
}

// Structural part of the association-direction rule: navigability, the
// association kinds accepted for the link shape, and the start-side
// compatibility of unidirectional associations.
std::optional<std::string> direction_problem(const TypeSystem& types, const Link& link) {
  const auto view = types.view_association(*link.association);
  const auto& name = link.association->name;
  if (view.navigable_nowhere) return "association '" + name + "' is not navigable at either end";
  if (link.part_part()) return std::nullopt;
  if (view.bidirectional) {
    return "bidirectional association '" + name + "' may only type a link between two parts";
  }

  const bool port_start = link.origin.from_port();
  const bool to_part = !link.far.is_port();
  if (!port_start) {
    if (view.kind != AssociationKind::ClassInterface && view.kind != AssociationKind::InterfaceInterface) {
      return "a link from a part to a port accepts a class-interface association pointing to the interface or an "
             "interface-interface association; '" +
             name + "' is " + std::string(to_string(view.kind));
    }
  } else if (view.kind != AssociationKind::InterfaceInterface) {
    std::string message = std::string("a link from a port to a ") + (to_part ? "part" : "port") +
                          " accepts only an interface-interface association; '" + name + "' is " +
                          std::string(to_string(view.kind));
    if (to_part && link.origin.kind == OriginKind::FromProvidedPort) {
      message += " (restriction applied to provided-port origins too; its scope for that direction is ambiguous)";
    }
    return message;
  }
  if (!end_fits(types, link.start, view.source->type)) {
    return "link starts at " + describe_end(link.start, *link.start_ref) +
           ", which is not compatible with the start type '" + view.source->type + "' of association '" + name + "'";
  }
  return std::nullopt;
}

InterfaceSet usage_closure(const TypeSystem& types, const Class& cls) {
  InterfaceSet out;
  auto add = [&](const Class& source) {
    for (const auto& used : source.usages) {
      auto closure = types.interface_closure(used);
      out.insert(closure.begin(), closure.end());
    }
  };
  add(cls);
  for (const auto& parent : types.parents_of(cls.name)) {
    if (const Class* parent_class = types.model().find_class(parent)) add(*parent_class);
  }
  return out;
}

InterfaceSet intersect(const InterfaceSet& a, const InterfaceSet& b) {
  InterfaceSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

InterfaceSet subtract(const InterfaceSet& a, const InterfaceSet& b) {
  InterfaceSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::vector<std::string> part_paths(const Class& cls, const std::vector<const Part*>& parts) {
  std::vector<std::string> out;
  for (const Part* part : parts) out.push_back(cls.name + "." + part->name);
  return out;
}

std::string part_list(const std::vector<const Part*>& parts, const Model& model) {
  std::string text;
  for (const Part* part : parts) {
    if (!text.empty()) text += ", ";
    const Class* type = model.find_class(part->type);
    text += part->name + " (" + std::string(type ? to_string(type->kind) : "?") + ")";
  }
  return text;
}

}  // namespace

bool pairwise_disjoint(const std::vector<InterfaceSet>& sets) {
  InterfaceSet all;
  std::size_t total = 0;
  for (const auto& set : sets) {
    all.insert(set.begin(), set.end());
    total += set.size();
  }
  return all.size() == total;
}

InterfaceSet overlapping_interfaces(const std::vector<InterfaceSet>& sets) {
  std::map<std::string, int> seen;
  for (const auto& set : sets) {
    for (const auto& name : set) ++seen[name];
  }
  InterfaceSet out;
  for (const auto& [name, count] : seen) {
    if (count > 1) out.insert(name);
  }
  return out;
}

std::vector<Diagnostic> rule_unidirectional(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& cls : types.model().classes) {
    const auto& provided = types.class_interfaces(cls.name);
    const auto used = usage_closure(types, cls);
    InterfaceSet covered;
    for (const auto& port : cls.ports) {
      if (!port.reversed) continue;
      auto carried = types.port_interfaces(port);
      covered.insert(carried.begin(), carried.end());
    }
    const auto uncovered = subtract(used, covered);
    for (const auto& port : cls.ports) {
      const auto carried = types.port_interfaces(port);
      const auto realized_hit = intersect(carried, provided);
      const auto used_hit = intersect(carried, used);
      const auto subject = cls.name + "." + port.name;
      if (!realized_hit.empty() && !used_hit.empty()) {
        out.push_back(error("W000", subject,
                            "port '" + port.name + "' is bidirectional: its contract '" + port.contract +
                                "' covers realized " + to_string(realized_hit) + " and used " + to_string(used_hit) +
                                "; split it into a provided port and a reversed port"));
      } else if (!port.reversed && !uncovered.empty()) {
        out.push_back(error("W000", subject,
                            "port '" + port.name + "' would be bidirectional: '" + cls.name + "' uses " +
                                to_string(uncovered) + " through no reversed port; split it into '" + port.name +
                                "_in: " + port.contract + "' and a reversed port for the used interfaces"));
      }
    }
  }
  return out;
}

std::vector<Diagnostic> rule_link_type(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& cls : types.model().classes) {
    for (std::size_t i = 0; i < cls.connectors.size(); ++i) {
      const auto& connector = cls.connectors[i];
      if (types.classify_link(cls, connector) != LinkKind::Forbidden) continue;
      const auto a = types.resolve_end(cls, connector.end1);
      const auto b = types.resolve_end(cls, connector.end2);
      if (a.shape == EndShape::Invalid || b.shape == EndShape::Invalid) continue;
      const std::vector<std::string> related = {end_path(cls, connector.end1), end_path(cls, connector.end2)};
      auto direction = [](const ResolvedEnd& end) { return end.port->reversed ? "required" : "provided"; };
      const auto subject = connector_path(cls, i);
      if (a.shape == EndShape::PartPort && b.shape == EndShape::PartPort) {
        out.push_back(error("W002", subject,
                            std::string("assembly between two ") + direction(a) + " ports " + quoted(connector.end1) +
                                " and " + quoted(connector.end2) + "; one end must be a reversed port",
                            related));
      } else if (a.shape == EndShape::SelfPort && b.shape == EndShape::SelfPort) {
        out.push_back(error("W001", subject,
                            "link between two ports of the composite itself (" + quoted(connector.end1) + " and " +
                                quoted(connector.end2) + ") is forbidden",
                            related));
      } else {
        out.push_back(error("W001", subject,
                            std::string("delegation between ") + direction(a) + " port " + quoted(connector.end1) +
                                " and " + direction(b) + " port " + quoted(connector.end2) +
                                "; delegated ports must have the same direction",
                            related));
      }
    }
  }
  return out;
}

std::vector<Diagnostic> rule_association_direction(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& link : directed_links(types)) {
    if (link.association == nullptr) continue;
    if (auto problem = direction_problem(types, link)) {
      out.push_back(error("W003", link.path(), *problem, link.related()));
    }
  }
  return out;
}

std::vector<Diagnostic> rule_typed_from_port(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& link : directed_links(types)) {
    if (link.association == nullptr || !link.origin.from_port()) continue;
    if (direction_problem(types, link)) continue;
    const auto view = types.view_association(*link.association);
    const auto& target = view.target->type;
    const auto& name = link.association->name;
    if (!end_fits(types, link.far, target)) {
      out.push_back(error("W004", link.path(),
                          "link ends at " + describe_end(link.far, *link.far_ref) +
                              ", which is not compatible with '" + target + "', the type association '" + name +
                              "' points to",
                          link.related()));
      continue;
    }
    const auto transported = types.transported_interfaces(*link.owner, *link.connector);
    if (transported.interfaces.count(target) == 0) {
      out.push_back(error("W004", link.path(),
                          "association '" + name + "' points to '" + target +
                              "', which is not among the transported interfaces " +
                              to_string(transported.interfaces),
                          link.related()));
    }
  }
  return out;
}

std::vector<Diagnostic> rule_typed_from_part(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& link : directed_links(types)) {
    if (link.origin.kind != OriginKind::FromPart) continue;
    if (link.association == nullptr) {
      out.push_back(error("W005", link.path(),
                          "link starting at part '" + to_string(*link.start_ref) +
                              "' must be typed with an association",
                          link.related()));
      continue;
    }
    if (direction_problem(types, link)) continue;
    const auto view = types.view_association(*link.association);
    const auto& name = link.association->name;
    if (link.part_part()) {
      const auto& first = link.start.part->type;
      const auto& second = link.far.part->type;
      auto fits = [&](const std::string& from, const std::string& to) {
        return types.classifier_compatible(from, view.source->type) &&
               types.classifier_compatible(to, view.target->type);
      };
      if (!fits(first, second) && !fits(second, first)) {
        out.push_back(error("W005", link.path(),
                            "part types '" + first + "' and '" + second + "' do not match the ends '" +
                                view.source->type + "' and '" + view.target->type + "' of association '" + name +
                                "' in either orientation",
                            link.related()));
      }
    } else if (!types.port_compatible(*link.far.port, view.target->type)) {
      out.push_back(error("W005", link.path(),
                          "port '" + to_string(*link.far_ref) + "' does not carry '" + view.target->type +
                              "', the type association '" + name + "' points to",
                          link.related()));
    }
  }
  return out;
}

std::vector<Diagnostic> rule_nonvoid(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& link : directed_links(types)) {
    const auto transported = types.transported_interfaces(*link.owner, *link.connector);
    if (!transported.computable || !transported.interfaces.empty()) continue;
    out.push_back(error("W006", link.path(),
                        "connector between " + quoted(*link.start_ref) + " and " + quoted(*link.far_ref) +
                            " transports no interface",
                        link.related()));
  }
  return out;
}

std::vector<Diagnostic> rule_pairwise_disjoint(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& occurrence : types.port_occurrences()) {
    std::vector<InterfaceSet> sets;
    std::vector<std::string> related;
    for (auto index : occurrence.outgoing) {
      const auto& connector = occurrence.context->connectors[index];
      if (connector.association) continue;
      auto transported = types.transported_interfaces(*occurrence.context, connector);
      if (!transported.computable) continue;
      sets.push_back(std::move(transported.interfaces));
      related.push_back(connector_path(*occurrence.context, index));
    }
    if (sets.size() < 2 || pairwise_disjoint(sets)) continue;
    out.push_back(error("W007", occurrence.path(),
                        "untyped links from port '" + occurrence.port->name + "' overlap on " +
                            to_string(overlapping_interfaces(sets)) +
                            "; type all but one of them with an explicit association",
                        related));
  }
  return out;
}

std::vector<Diagnostic> rule_completeness(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& occurrence : types.port_occurrences()) {
    if (occurrence.outgoing.empty()) continue;
    InterfaceSet carried;
    std::vector<std::string> related;
    for (auto index : occurrence.outgoing) {
      const auto transported = types.transported_interfaces(*occurrence.context, occurrence.context->connectors[index]);
      carried.insert(transported.interfaces.begin(), transported.interfaces.end());
      related.push_back(connector_path(*occurrence.context, index));
    }
    const auto expected = types.port_interfaces(*occurrence.port);
    if (carried == expected) continue;
    std::string message = "links from port '" + occurrence.port->name + "' transport " + to_string(carried) +
                          " but the port carries " + to_string(expected);
    const auto missing = subtract(expected, carried);
    const auto excess = subtract(carried, expected);
    if (!missing.empty()) message += "; missing " + to_string(missing);
    if (!excess.empty()) message += "; excess " + to_string(excess);
    out.push_back(error("W008", occurrence.path(), message, related));
  }
  return out;
}

std::vector<Diagnostic> rule_concurrency(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  const auto& model = types.model();
  auto kind_of = [&](const Part& part) {
    const Class* type = model.find_class(part.type);
    return type ? type->kind : ClassKind::Passive;
  };
  for (const auto& cls : model.classes) {
    if (!cls.is_composite()) continue;
    if (cls.kind == ClassKind::Passive) {
      std::vector<const Part*> offending;
      for (const auto& part : cls.parts) {
        if (kind_of(part) != ClassKind::Passive) offending.push_back(&part);
      }
      if (!offending.empty()) {
        out.push_back(error("W009", cls.name,
                            "passive composite '" + cls.name + "' may contain only passive parts; found " +
                                part_list(offending, model),
                            part_paths(cls, offending)));
      }
    } else if (cls.kind == ClassKind::Active) {
      int passive = 0;
      int active_or_protected = 0;
      for (const auto& part : cls.parts) {
        const auto kind = kind_of(part);
        if (kind == ClassKind::Passive) ++passive;
        if (kind == ClassKind::Active || kind == ClassKind::Protected) ++active_or_protected;
      }
      const int parts = static_cast<int>(cls.parts.size());
      if (passive == parts || active_or_protected == parts) continue;
      std::vector<const Part*> offending;
      for (const auto& part : cls.parts) {
        const auto kind = kind_of(part);
        if (kind != ClassKind::Active && kind != ClassKind::Protected) offending.push_back(&part);
      }
      out.push_back(error("W010", cls.name,
                          "active composite '" + cls.name +
                              "' must contain only passive parts or only active and protected parts; offending " +
                              part_list(offending, model) + "; a shared passive part may be declared protected",
                          part_paths(cls, offending)));
    }
  }
  return out;
}

std::vector<Diagnostic> rule_observer(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  const auto& model = types.model();
  for (const auto& cls : model.classes) {
    if (!cls.is_composite() || cls.kind != ClassKind::Observer) continue;
    std::vector<const Part*> offending;
    for (const auto& part : cls.parts) {
      const Class* type = model.find_class(part.type);
      if (type == nullptr || type->kind != ClassKind::Observer) offending.push_back(&part);
    }
    if (offending.empty()) continue;
    out.push_back(error("W011", cls.name,
                        "observer composite '" + cls.name + "' may contain only observer parts; found " +
                            part_list(offending, model),
                        part_paths(cls, offending)));
  }
  return out;
}

std::vector<Diagnostic> rule_notes(const TypeSystem& types) {
  std::vector<Diagnostic> out;
  for (const auto& occurrence : types.port_occurrences()) {
    if (!occurrence.outgoing.empty()) continue;
    const bool self_provided = occurrence.part == nullptr && !occurrence.port->reversed &&
                               occurrence.context->is_composite();
    const bool part_required = occurrence.part != nullptr && occurrence.port->reversed;
    if (!self_provided && !part_required) continue;
    out.push_back(Diagnostic{"N001", Severity::Note, occurrence.path(),
                             "port '" + occurrence.port->name + "' has no outgoing link; requests reaching it stop here",
                             {}});
  }
  for (const auto& cls : types.model().classes) {
    if (!cls.is_composite() || cls.kind != ClassKind::Protected) continue;
    out.push_back(Diagnostic{"N002", Severity::Note, cls.name,
                             "no concurrency rule applies to protected composite '" + cls.name + "'", {}});
  }
  return out;
}

CheckReport check_model(const Model& model, const CheckOptions& options) {
  const TypeSystem types(model);
  CheckReport report;
  auto& all = report.diagnostics;
  for (auto rule : {rule_unidirectional, rule_link_type, rule_association_direction, rule_typed_from_port,
                    rule_typed_from_part, rule_nonvoid, rule_pairwise_disjoint, rule_completeness,
                    rule_concurrency, rule_observer, rule_notes}) {
    auto found = rule(types);
    all.insert(all.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  for (auto& diagnostic : all) {
    if (diagnostic.severity == Severity::Error && options.downgrade.count(diagnostic.code) != 0) {
      diagnostic.severity = Severity::Warning;
    }
    ++report.stats[diagnostic.code];
  }
  sort_diagnostics(all);
  report.passed = !has_errors(all);
  return report;
}

std::string render_text(const Diagnostic& diagnostic) {
  std::string text = diagnostic.subject + ": " + std::string(to_string(diagnostic.severity)) + " " +
                     diagnostic.code + ": " + diagnostic.message;
  if (!diagnostic.related.empty()) {
    text += " [";
    for (std::size_t i = 0; i < diagnostic.related.size(); ++i) {
      if (i != 0) text += ", ";
      text += diagnostic.related[i];
    }
    text += "]";
  }
  return text;
}

std::string render_text(const CheckReport& report) {
  std::string text;
  int errors = 0;
  int warnings = 0;
  int notes = 0;
  for (const auto& diagnostic : report.diagnostics) {
    text += render_text(diagnostic) + "\n";
    switch (diagnostic.severity) {
      case Severity::Error:
        ++errors;
        break;
      case Severity::Warning:
        ++warnings;
        break;
      case Severity::Note:
        ++notes;
        break;
    }
  }
  text += std::to_string(errors) + " error(s), " + std::to_string(warnings) + " warning(s), " +
          std::to_string(notes) + " note(s): " + (report.passed ? "passed" : "failed") + "\n";
  return text;
}

std::string render_json(const CheckReport& report) {
  nlohmann::ordered_json doc;
  doc["passed"] = report.passed;
  doc["stats"] = nlohmann::ordered_json::object();
  for (const auto& [code, count] : report.stats) doc["stats"][code] = count;
  doc["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& diagnostic : report.diagnostics) {
    doc["diagnostics"].push_back({{"code", diagnostic.code},
                                  {"severity", to_string(diagnostic.severity)},
                                  {"subject", diagnostic.subject},
                                  {"message", diagnostic.message},
                                  {"related", diagnostic.related}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace compocheck
