#include "compocheck/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "json.hpp"

namespace compocheck {

std::string_view to_string(RequestStatus status) {
  switch (status) {
    case RequestStatus::InTransit:
      return "inTransit";
    case RequestStatus::Delivered:
      return "delivered";
    case RequestStatus::Stuck:
      return "stuck";
  }
  return "inTransit";
}

std::string InstanceGraph::holder_id(std::size_t holder) const {
  if (holder == kEnvironment) return "<env>";
  const auto& h = holders_.at(holder);
  return h.kind == HolderKind::Component ? components_[h.index].id : ports_[h.index].id;
}

std::optional<std::size_t> InstanceGraph::find_holder(std::string_view id) const {
  for (std::size_t i = 0; i < holders_.size(); ++i) {
    if (holder_id(i) == id) return i;
  }
  return std::nullopt;
}

InterfaceSet InstanceGraph::outgoing_interfaces(std::size_t holder) const {
  InterfaceSet out;
  for (const auto& binding : bindings_) {
    if (binding.holder == holder) out.insert(binding.interface);
  }
  return out;
}

struct GraphAccess {
  static InstanceGraph build(const Model& source, std::string_view root_name) {
    InstanceGraph graph;
    graph.model_ = std::make_shared<const Model>(source);
    graph.types_ = std::make_shared<const TypeSystem>(*graph.model_);
    const Class* root = graph.model_->find_class(root_name);
    if (root == nullptr) throw SimError("root '" + std::string(root_name) + "' is not a declared class");

    std::string root_id = root->name;
    root_id[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(root_id[0])));
    add_component(graph, *root, root_id, std::nullopt);
    for (std::size_t c = 0; c < graph.components_.size(); ++c) bind_connectors(graph, c);
    return graph;
  }

  static std::size_t add_component(InstanceGraph& graph, const Class& cls, const std::string& id,
                                   std::optional<std::size_t> parent) {
    const std::size_t index = graph.components_.size();
    graph.components_.push_back(ComponentInstance{id, &cls, parent, graph.holders_.size()});
    graph.holders_.push_back(Holder{HolderKind::Component, index});
    for (const auto& port : cls.ports) {
      graph.ports_.push_back(PortInstance{id + "." + port.name, &port, index, graph.holders_.size()});
      graph.holders_.push_back(Holder{HolderKind::Port, graph.ports_.size() - 1});
    }
    for (const auto& part : cls.parts) {
      const Class* type = graph.model_->find_class(part.type);
      if (type == nullptr) throw SimError("part '" + id + "." + part.name + "' has no class type");
      for (int k = 0; k < part.multiplicity; ++k) {
        std::string child = id + "." + part.name;
        if (part.multiplicity > 1) child += "[" + std::to_string(k) + "]";
        add_component(graph, *type, child, index);
      }
    }
    return index;
  }

  static std::vector<std::size_t> children_for(const InstanceGraph& graph, std::size_t component,
                                               const std::string& part) {
    std::vector<std::size_t> out;
    const auto prefix = graph.components_[component].id + "." + part;
    for (std::size_t i = 0; i < graph.components_.size(); ++i) {
      const auto& child = graph.components_[i];
      if (child.parent != component) continue;
      if (child.id == prefix || child.id.rfind(prefix + "[", 0) == 0) out.push_back(i);
    }
    return out;
  }

  static std::size_t port_holder(const InstanceGraph& graph, std::size_t component, const std::string& port) {
    const auto id = graph.components_[component].id + "." + port;
    for (const auto& instance : graph.ports_) {
      if (instance.owner == component && instance.id == id) return instance.holder;
    }
    throw SimError("no port instance '" + id + "'");
  }

  // Holder indices an end refers to inside one instance of the owning class.
  static std::vector<std::size_t> end_holders(const InstanceGraph& graph, std::size_t component, const EndRef& end) {
    if (!end.part) return {port_holder(graph, component, *end.port)};
    std::vector<std::size_t> out;
    for (auto child : children_for(graph, component, *end.part)) {
      out.push_back(end.port ? port_holder(graph, child, *end.port) : graph.components_[child].holder);
    }
    return out;
  }

  static void bind(InstanceGraph& graph, const std::vector<std::size_t>& from, const std::vector<std::size_t>& to,
                   const InterfaceSet& interfaces, const std::optional<std::string>& association,
                   const std::string& connector) {
    for (auto holder : from) {
      for (const auto& iface : interfaces) {
        for (auto target : to) {
          graph.bindings_.push_back(
              DelegBinding{holder, association ? *association : deleg_association_name(iface), target, iface, connector});
        }
      }
    }
  }

  static void bind_connectors(InstanceGraph& graph, std::size_t component) {
    const Class& cls = *graph.components_[component].cls;
    const auto& types = *graph.types_;
    for (std::size_t i = 0; i < cls.connectors.size(); ++i) {
      const auto& connector = cls.connectors[i];
      const auto path = connector_path(cls, i);
      const auto kind = types.classify_link(cls, connector);
      if (kind == LinkKind::Forbidden) throw SimError("connector " + path + " is a forbidden link");
      const auto origin = types.link_origin(cls, connector);
      const auto& start = origin.end == 2 ? connector.end2 : connector.end1;
      const auto& far = origin.end == 2 ? connector.end1 : connector.end2;
      const Association* association = types.association_of(connector);

      if (kind == LinkKind::AssemblyPartPart) {
        if (association == nullptr) continue;
        const auto view = types.view_association(*association);
        const auto a = types.resolve_end(cls, connector.end1);
        const auto b = types.resolve_end(cls, connector.end2);
        auto fits = [&](const ResolvedEnd& from, const ResolvedEnd& to) {
          return types.classifier_compatible(from.part->type, view.source->type) &&
                 types.classifier_compatible(to.part->type, view.target->type);
        };
        const auto first = end_holders(graph, component, connector.end1);
        const auto second = end_holders(graph, component, connector.end2);
        const auto forward = types.classifier_interfaces(view.target->type);
        const auto backward = types.classifier_interfaces(view.source->type);
        const bool a_to_b = fits(a, b) || !fits(b, a);
        if (a_to_b) {
          bind(graph, first, second, forward, association->name, path);
          if (view.bidirectional) bind(graph, second, first, backward, association->name, path);
        } else {
          bind(graph, second, first, forward, association->name, path);
          if (view.bidirectional) bind(graph, first, second, backward, association->name, path);
        }
        continue;
      }

      const auto transported = types.transported_interfaces(cls, connector);
      if (!transported.computable) continue;
      std::optional<std::string> name;
      if (association != nullptr) name = association->name;
      bind(graph, end_holders(graph, component, start), end_holders(graph, component, far), transported.interfaces,
           name, path);
    }
  }

  static int inject(InstanceGraph& graph, std::string_view location, std::string_view interface_name,
                    std::string_view operation) {
    const Interface* iface = graph.model_->find_interface(interface_name);
    if (iface == nullptr) throw SimError("'" + std::string(interface_name) + "' is not a declared interface");
    if (iface->is_group) {
      throw SimError("'" + iface->name + "' is an interface group; inject one of the interfaces it bundles");
    }
    const auto holder = graph.find_holder(location);
    if (!holder) throw SimError("no instance or port instance '" + std::string(location) + "'");
    const auto& h = graph.holders_[*holder];
    if (h.kind == HolderKind::Port) {
      const auto& instance = graph.ports_[h.index];
      if (graph.types_->port_interfaces(*instance.port).count(iface->name) == 0) {
        throw SimError("port instance '" + instance.id + "' does not carry '" + iface->name + "'");
      }
    } else if (graph.outgoing_interfaces(*holder).count(iface->name) == 0) {
      throw SimError("instance '" + graph.components_[h.index].id + "' has no outgoing binding for '" + iface->name +
                     "'");
    }
    Request request;
    request.id = static_cast<int>(graph.requests_.size()) + 1;
    request.interface = iface->name;
    if (!operation.empty()) {
      const auto& ops = iface->operations;
      if (!ops.empty() && std::find(ops.begin(), ops.end(), operation) == ops.end()) {
        throw SimError("interface '" + iface->name + "' has no operation '" + std::string(operation) + "'");
      }
      request.operation = std::string(operation);
    } else {
      request.operation = iface->operations.empty() ? "*" : iface->operations.front();
    }
    request.location = *holder;
    request.path.push_back(*holder);
    graph.requests_.push_back(std::move(request));
    return graph.requests_.back().id;
  }

  // Bindings a holder uses for one interface: its deleg_I binding when there
  // is one, otherwise the first association that carries the interface.
  static std::vector<const DelegBinding*> route(const InstanceGraph& graph, std::size_t holder,
                                                const std::string& iface) {
    std::vector<const DelegBinding*> carrying;
    for (const auto& binding : graph.bindings_) {
      if (binding.holder == holder && binding.interface == iface) carrying.push_back(&binding);
    }
    if (carrying.empty()) return carrying;
    const auto deleg = deleg_association_name(iface);
    const bool has_deleg = std::any_of(carrying.begin(), carrying.end(),
                                       [&](const DelegBinding* b) { return b->association == deleg; });
    const auto chosen = has_deleg ? deleg : carrying.front()->association;
    std::vector<const DelegBinding*> out;
    for (const auto* binding : carrying) {
      if (binding->association == chosen) out.push_back(binding);
    }
    return out;
  }

  static bool has_bindings(const InstanceGraph& graph, std::size_t holder) {
    return std::any_of(graph.bindings_.begin(), graph.bindings_.end(),
                       [&](const DelegBinding& b) { return b.holder == holder; });
  }

  static void stuck(InstanceGraph& graph, StepOutcome& outcome, std::size_t request, std::string code,
                    std::string message) {
    auto& r = graph.requests_[request];
    r.status = RequestStatus::Stuck;
    Diagnostic diagnostic{std::move(code), Severity::Error, graph.holder_id(r.location), std::move(message),
                          {"request " + std::to_string(r.id)}};
    outcome.diagnostics.push_back(diagnostic);
    graph.diagnostics_.push_back(std::move(diagnostic));
  }

  static void arrive(InstanceGraph& graph, StepOutcome& outcome, std::size_t request, std::size_t target) {
    auto& r = graph.requests_[request];
    if (target == kEnvironment) {
      r.location = kEnvironment;
      r.path.push_back(kEnvironment);
      r.status = RequestStatus::Delivered;
      return;
    }
    const auto& h = graph.holders_[target];
    if (h.kind == HolderKind::Port && std::find(r.path.begin(), r.path.end(), target) != r.path.end()) {
      throw SimError("request " + std::to_string(r.id) + " revisits port instance '" + graph.holder_id(target) +
                     "': delegation cycle");
    }
    r.location = target;
    r.path.push_back(target);
    if (h.kind == HolderKind::Component) {
      const auto& instance = graph.components_[h.index];
      if (graph.types_->class_interfaces(instance.cls->name).count(r.interface) != 0) {
        r.status = RequestStatus::Delivered;
      } else {
        stuck(graph, outcome, request, "R002",
              "'" + instance.id + "' of class '" + instance.cls->name + "' does not provide '" + r.interface + "'");
      }
      return;
    }
    const auto& instance = graph.ports_[h.index];
    if (graph.types_->port_interfaces(*instance.port).count(r.interface) == 0) {
      stuck(graph, outcome, request, "R003", "port instance '" + instance.id + "' does not carry '" + r.interface + "'");
    }
  }

  static StepOutcome step(InstanceGraph& graph) {
    StepOutcome outcome;
    std::optional<std::size_t> chosen;
    for (std::size_t i = 0; i < graph.requests_.size(); ++i) {
      const auto& r = graph.requests_[i];
      if (r.status != RequestStatus::InTransit) continue;
      if (!chosen || r.location < graph.requests_[*chosen].location) chosen = i;
    }
    if (!chosen) {
      outcome.quiescent = true;
      return outcome;
    }
    const int number = ++graph.steps_;
    const std::size_t index = *chosen;
    const std::size_t location = graph.requests_[index].location;
    const std::string iface = graph.requests_[index].interface;
    const auto& holder = graph.holders_[location];

    std::vector<std::size_t> targets;
    std::string via;
    const auto routed = route(graph, location, iface);
    if (!routed.empty()) {
      for (const auto* binding : routed) targets.push_back(binding->target);
      via = routed.front()->association;
    } else if (holder.kind == HolderKind::Component) {
      stuck(graph, outcome, index, "R001", "no outgoing binding for '" + iface + "'");
    } else if (has_bindings(graph, location)) {
      stuck(graph, outcome, index, "R001", "no link from this port transports '" + iface + "'");
    } else {
      // Default behavior of an unconnected port: provided ports hand requests
      // to their owner, required ports of the root to the environment.
      const auto& port = graph.ports_[holder.index];
      const auto& owner = graph.components_[port.owner];
      if (!port.port->reversed) {
        targets.push_back(owner.holder);
        via = "owner";
      } else if (!owner.parent) {
        targets.push_back(kEnvironment);
        via = "environment";
      } else {
        stuck(graph, outcome, index, "R001", "required port has no outgoing link");
      }
    }

    const Request snapshot = graph.requests_[index];
    for (std::size_t k = 0; k < targets.size(); ++k) {
      std::size_t request = index;
      if (k > 0) {
        // Fan-out over a multi-instance part: each extra target gets a copy.
        Request clone = snapshot;
        clone.id = static_cast<int>(graph.requests_.size()) + 1;
        graph.requests_.push_back(std::move(clone));
        request = graph.requests_.size() - 1;
      }
      auto& r = graph.requests_[request];
      if (holder.kind == HolderKind::Port) ++r.hops;
      TraceEvent event{number, r.id, graph.holder_id(location), graph.holder_id(targets[k]), via};
      outcome.events.push_back(event);
      graph.events_.push_back(std::move(event));
      arrive(graph, outcome, request, targets[k]);
    }
    return outcome;
  }
};

InstanceGraph instantiate(const Model& model, std::string_view root) { return GraphAccess::build(model, root); }

int inject(InstanceGraph& graph, std::string_view location, std::string_view interface_name,
           std::string_view operation) {
  return GraphAccess::inject(graph, location, interface_name, operation);
}

StepOutcome step(InstanceGraph& graph) { return GraphAccess::step(graph); }

Trace run_to_quiescence(InstanceGraph& graph) {
  while (!step(graph).quiescent) {
  }
  Trace trace;
  trace.events = graph.events();
  trace.diagnostics = graph.diagnostics();
  for (const auto& request : graph.requests()) {
    RequestSummary summary{request.id, request.interface, request.operation, request.status,
                           graph.holder_id(request.location), {}};
    for (auto holder : request.path) summary.path.push_back(graph.holder_id(holder));
    trace.requests.push_back(std::move(summary));
  }
  return trace;
}

SafetyReport check_type_safety(const Trace& trace, const InstanceGraph& graph) {
  SafetyReport report;
  for (const auto& request : trace.requests) {
    const auto label = "request " + std::to_string(request.id) + " (" + request.interface + "." + request.operation + ")";
    switch (request.status) {
      case RequestStatus::InTransit:
        ++report.in_transit;
        report.violations.push_back(label + " still in transit at '" + request.at + "'");
        continue;
      case RequestStatus::Stuck:
        ++report.stuck;
        report.violations.push_back(label + " stuck at '" + request.at + "'");
        continue;
      case RequestStatus::Delivered:
        ++report.delivered;
        break;
    }
    if (request.at == graph.holder_id(kEnvironment)) continue;
    const auto holder = graph.find_holder(request.at);
    if (!holder || graph.holders()[*holder].kind != HolderKind::Component) {
      report.violations.push_back(label + " delivered to '" + request.at + "', which is not a component");
      continue;
    }
    const auto& instance = graph.components()[graph.holders()[*holder].index];
    if (graph.types().class_interfaces(instance.cls->name).count(request.interface) == 0) {
      report.violations.push_back(label + " delivered to '" + instance.id + "', whose class '" + instance.cls->name +
                                  "' does not provide '" + request.interface + "'");
    }
  }
  report.safe = report.violations.empty();
  return report;
}

std::vector<Injection> default_injections(const InstanceGraph& graph) {
  std::vector<Injection> out;
  for (const auto& instance : graph.ports()) {
    if (instance.owner != 0 || instance.port->reversed) continue;
    for (const auto& iface : graph.types().port_interfaces(*instance.port)) out.push_back({instance.id, iface, ""});
  }
  return out;
}

std::vector<Injection> full_injections(const InstanceGraph& graph) {
  std::vector<Injection> out;
  for (std::size_t h = 0; h < graph.holders().size(); ++h) {
    const auto& holder = graph.holders()[h];
    InterfaceSet interfaces;
    if (holder.kind == HolderKind::Port) {
      interfaces = graph.types().port_interfaces(*graph.ports()[holder.index].port);
    } else {
      interfaces = graph.outgoing_interfaces(h);
    }
    for (const auto& iface : interfaces) out.push_back({graph.holder_id(h), iface, ""});
  }
  return out;
}

Simulation simulate(const Model& model, std::string_view root, const std::vector<Injection>& injections) {
  auto graph = instantiate(model, root);
  for (const auto& injection : injections) inject(graph, injection.location, injection.interface, injection.operation);
  Simulation out;
  out.trace = run_to_quiescence(graph);
  out.safety = check_type_safety(out.trace, graph);
  return out;
}

std::string render_trace_json_lines(const Trace& trace, const SafetyReport& safety) {
  using nlohmann::ordered_json;
  std::string text;
  for (const auto& event : trace.events) {
    ordered_json line;
    line["step"] = event.step;
    line["request"] = event.request;
    line["from"] = event.from;
    line["to"] = event.to;
    line["via"] = event.via;
    text += line.dump() + "\n";
  }
  ordered_json summary;
  summary["summary"] = {{"delivered", safety.delivered}, {"stuck", safety.stuck}, {"inTransit", safety.in_transit}};
  summary["requests"] = ordered_json::array();
  for (const auto& request : trace.requests) {
    ordered_json item;
    item["id"] = request.id;
    item["interface"] = request.interface;
    item["operation"] = request.operation;
    item["status"] = to_string(request.status);
    item["at"] = request.at;
    item["path"] = request.path;
    summary["requests"].push_back(std::move(item));
  }
  summary["safe"] = safety.safe;
  summary["violations"] = safety.violations;
  text += summary.dump() + "\n";
  return text;
}

std::string render_trace_text(const Trace& trace, const SafetyReport& safety) {
  std::string text;
  for (const auto& event : trace.events) {
    text += "step " + std::to_string(event.step) + ": request " + std::to_string(event.request) + " " + event.from +
            " -> " + event.to + " via " + event.via + "\n";
  }
  for (const auto& request : trace.requests) {
    text += "request " + std::to_string(request.id) + " " + request.interface + "." + request.operation + ": " +
            std::string(to_string(request.status)) + " at " + request.at + "\n";
  }
  for (const auto& violation : safety.violations) text += "violation: " + violation + "\n";
  text += std::to_string(safety.delivered) + " delivered, " + std::to_string(safety.stuck) + " stuck, " +
          std::to_string(safety.in_transit) + " in transit: " + (safety.safe ? "safe" : "unsafe") + "\n";
  return text;
}

}  // namespace compocheck
