#include "compocheck/type_system.hpp"

#include <algorithm>

namespace compocheck {

namespace {

const InterfaceSet kEmpty;

}  // namespace

std::string to_string(const InterfaceSet& set) {
  std::string text = "{";
  for (const auto& name : set) {
    if (text.size() > 1) text += ", ";
    text += name;
  }
  return text + "}";
}

std::string_view to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::AssemblyPartPart:
      return "AssemblyPartPart";
    case LinkKind::InboundDelegationPortPort:
      return "InboundDelegationPortPort";
    case LinkKind::OutboundDelegationPortPort:
      return "OutboundDelegationPortPort";
    case LinkKind::AssemblyPortPort:
      return "AssemblyPortPort";
    case LinkKind::AssemblyPartProvidedPort:
      return "AssemblyPartProvidedPort";
    case LinkKind::AssemblyPartRequiredPort:
      return "AssemblyPartRequiredPort";
    case LinkKind::InboundDelegationPartPort:
      return "InboundDelegationPartPort";
    case LinkKind::OutboundDelegationPartPort:
      return "OutboundDelegationPartPort";
    case LinkKind::Forbidden:
      return "Forbidden";
  }
  return "Forbidden";
}

std::string_view to_string(OriginKind kind) {
  switch (kind) {
    case OriginKind::FromProvidedPort:
      return "FromProvidedPort";
    case OriginKind::FromRequiredPort:
      return "FromRequiredPort";
    case OriginKind::FromPart:
      return "FromPart";
    case OriginKind::Undirected:
      return "Undirected";
  }
  return "Undirected";
}

bool is_delegation(LinkKind kind) {
  switch (kind) {
    case LinkKind::InboundDelegationPortPort:
    case LinkKind::OutboundDelegationPortPort:
    case LinkKind::InboundDelegationPartPort:
    case LinkKind::OutboundDelegationPartPort:
      return true;
    default:
      return false;
  }
}

std::string PortOccurrence::path() const {
  std::string text = context->name + ".";
  if (part != nullptr) text += part->name + ".";
  return text + port->name;
}

TypeSystem::TypeSystem(const Model& model) : model_(model) {
  auto generals_of = [&](const std::string& name) -> const std::vector<std::string>* {
    if (const Class* cls = model_.find_class(name)) return &cls->generals;
    if (const Interface* iface = model_.find_interface(name)) return &iface->generals;
    return nullptr;
  };

  // Depth-first reachability per classifier; the visited set also stops on
  // cycles, which integrity checking reports separately.
  auto closure = [&](const std::string& start) {
    InterfaceSet seen;
    std::vector<std::string> work;
    if (const auto* generals = generals_of(start)) work.assign(generals->begin(), generals->end());
    while (!work.empty()) {
      auto next = std::move(work.back());
      work.pop_back();
      if (next == start || !seen.insert(next).second) continue;
      if (const auto* generals = generals_of(next)) work.insert(work.end(), generals->begin(), generals->end());
    }
    return seen;
  };
  for (const auto& iface : model_.interfaces) parents_[iface.name] = closure(iface.name);
  for (const auto& cls : model_.classes) parents_[cls.name] = closure(cls.name);

  for (const auto& cls : model_.classes) {
    InterfaceSet provided;
    auto add_realizations = [&](const Class& source) {
      for (const auto& realized : source.realizes) {
        auto realized_closure = interface_closure(realized);
        provided.insert(realized_closure.begin(), realized_closure.end());
        // A realized group still contributes its parents.
        for (const auto& parent : parents_of(realized)) {
          const Interface* iface = model_.find_interface(parent);
          if (iface != nullptr && !iface->is_group) provided.insert(parent);
        }
      }
    };
    add_realizations(cls);
    for (const auto& parent : parents_of(cls.name)) {
      if (const Class* parent_class = model_.find_class(parent)) add_realizations(*parent_class);
    }
    class_interfaces_[cls.name] = std::move(provided);
  }
}

const InterfaceSet& TypeSystem::parents_of(std::string_view classifier) const {
  auto it = parents_.find(classifier);
  return it == parents_.end() ? kEmpty : it->second;
}

InterfaceSet TypeSystem::interface_closure(std::string_view interface_name) const {
  InterfaceSet out;
  auto keep = [&](std::string_view name) {
    const Interface* iface = model_.find_interface(name);
    if (iface != nullptr && !iface->is_group) out.emplace(name);
  };
  keep(interface_name);
  for (const auto& parent : parents_of(interface_name)) keep(parent);
  return out;
}

const InterfaceSet& TypeSystem::class_interfaces(std::string_view class_name) const {
  auto it = class_interfaces_.find(class_name);
  return it == class_interfaces_.end() ? kEmpty : it->second;
}

InterfaceSet TypeSystem::classifier_interfaces(std::string_view classifier) const {
  if (model_.is_interface(classifier)) return interface_closure(classifier);
  return class_interfaces(classifier);
}

bool TypeSystem::classifier_compatible(std::string_view sub, std::string_view super) const {
  const bool sub_is_interface = model_.is_interface(sub);
  const bool super_is_interface = model_.is_interface(super);
  if (sub_is_interface && super_is_interface) return interface_closure(sub).count(super) != 0;
  if (model_.is_class(sub) && super_is_interface) return class_interfaces(sub).count(super) != 0;
  // The association end must name the link end's type or one of its supertypes.
  return sub == super || parents_of(sub).count(super) != 0;
}

bool TypeSystem::port_compatible(const Port& port, std::string_view type) const {
  if (!model_.is_interface(type)) return false;
  const auto carried = port_interfaces(port);
  const auto needed = interface_closure(type);
  return std::includes(carried.begin(), carried.end(), needed.begin(), needed.end());
}

ResolvedEnd TypeSystem::resolve_end(const Class& owner, const EndRef& end) const {
  ResolvedEnd out;
  if (!end.part && end.port) {
    out.port = owner.find_port(*end.port);
    if (out.port != nullptr) out.shape = EndShape::SelfPort;
    return out;
  }
  if (!end.part) return out;
  out.part = owner.find_part(*end.part);
  if (out.part == nullptr) return out;
  out.part_type = model_.find_class(out.part->type);
  if (!end.port) {
    out.shape = EndShape::Part;
    return out;
  }
  if (out.part_type == nullptr) return out;
  out.port = out.part_type->find_port(*end.port);
  if (out.port != nullptr) out.shape = EndShape::PartPort;
  return out;
}

LinkKind TypeSystem::classify_link(const Class& owner, const Connector& connector) const {
  const auto a = resolve_end(owner, connector.end1);
  const auto b = resolve_end(owner, connector.end2);
  if (a.shape == EndShape::Invalid || b.shape == EndShape::Invalid) return LinkKind::Forbidden;

  auto count = [&](EndShape shape) { return (a.shape == shape ? 1 : 0) + (b.shape == shape ? 1 : 0); };
  const int parts = count(EndShape::Part);
  const int self_ports = count(EndShape::SelfPort);
  const int part_ports = count(EndShape::PartPort);

  if (parts == 2) return LinkKind::AssemblyPartPart;
  if (self_ports == 2) return LinkKind::Forbidden;

  if (parts == 1) {
    const auto& port_end = a.shape == EndShape::Part ? b : a;
    if (port_end.shape == EndShape::PartPort) {
      return port_end.is_provided_port() ? LinkKind::AssemblyPartProvidedPort : LinkKind::AssemblyPartRequiredPort;
    }
    return port_end.is_provided_port() ? LinkKind::InboundDelegationPartPort : LinkKind::OutboundDelegationPartPort;
  }

  const bool same_direction = a.port->reversed == b.port->reversed;
  if (self_ports == 1 && part_ports == 1) {
    if (!same_direction) return LinkKind::Forbidden;
    return a.port->reversed ? LinkKind::OutboundDelegationPortPort : LinkKind::InboundDelegationPortPort;
  }
  return same_direction ? LinkKind::Forbidden : LinkKind::AssemblyPortPort;
}

LinkOrigin TypeSystem::link_origin(const Class& owner, const Connector& connector) const {
  const auto kind = classify_link(owner, connector);
  const auto a = resolve_end(owner, connector.end1);
  auto end_where = [&](auto predicate) { return predicate(a) ? 1 : 2; };
  switch (kind) {
    case LinkKind::AssemblyPartPart:
      return {OriginKind::FromPart, 1};
    case LinkKind::InboundDelegationPortPort:
    case LinkKind::InboundDelegationPartPort:
      return {OriginKind::FromProvidedPort, end_where([](const ResolvedEnd& e) { return e.shape == EndShape::SelfPort; })};
    case LinkKind::OutboundDelegationPortPort:
      return {OriginKind::FromRequiredPort, end_where([](const ResolvedEnd& e) { return e.shape == EndShape::PartPort; })};
    case LinkKind::AssemblyPortPort:
      return {OriginKind::FromRequiredPort, end_where([](const ResolvedEnd& e) { return e.is_required_port(); })};
    case LinkKind::AssemblyPartRequiredPort:
      return {OriginKind::FromRequiredPort, end_where([](const ResolvedEnd& e) { return e.is_port(); })};
    case LinkKind::AssemblyPartProvidedPort:
    case LinkKind::OutboundDelegationPartPort:
      return {OriginKind::FromPart, end_where([](const ResolvedEnd& e) { return e.shape == EndShape::Part; })};
    case LinkKind::Forbidden:
      break;
  }
  return {};
}

const Association* TypeSystem::association_of(const Connector& connector) const {
  return connector.association ? model_.find_association(*connector.association) : nullptr;
}

TransportedSet TypeSystem::transported_interfaces(const Class& owner, const Connector& connector) const {
  const auto kind = classify_link(owner, connector);
  if (kind == LinkKind::Forbidden || kind == LinkKind::AssemblyPartPart) return {};
  const auto origin = link_origin(owner, connector);
  const Association* association = association_of(connector);
  // Without an association a part has no way to address the link.
  if (origin.kind == OriginKind::FromPart && association == nullptr) return {};

  const auto a = resolve_end(owner, connector.end1);
  const auto b = resolve_end(owner, connector.end2);
  const auto& origin_end = origin.end == 1 ? a : b;
  const auto& far_end = origin.end == 1 ? b : a;
  // For part-port links the port side is the one whose set is intersected.
  const auto& port_end = origin_end.is_port() ? origin_end : far_end;

  InterfaceSet other;
  if (association != nullptr) {
    other = classifier_interfaces(view_association(*association).target->type);
  } else if (far_end.is_port()) {
    other = port_interfaces(*far_end.port);
  } else {
    other = class_interfaces(far_end.part->type);
  }
  const auto own = port_interfaces(*port_end.port);

  TransportedSet out;
  out.computable = true;
  std::set_intersection(own.begin(), own.end(), other.begin(), other.end(),
                        std::inserter(out.interfaces, out.interfaces.end()));
  return out;
}

AssociationView TypeSystem::view_association(const Association& association) const {
  AssociationView view;
  view.association = &association;
  const bool nav1 = association.end1.navigable;
  const bool nav2 = association.end2.navigable;
  if (nav1 && !nav2) {
    view.source = &association.end2;
    view.target = &association.end1;
  } else {
    view.source = &association.end1;
    view.target = &association.end2;
  }
  view.bidirectional = nav1 && nav2;
  view.navigable_nowhere = !nav1 && !nav2;

  const bool source_class = model_.is_class(view.source->type);
  const bool source_iface = model_.is_interface(view.source->type);
  const bool target_class = model_.is_class(view.target->type);
  const bool target_iface = model_.is_interface(view.target->type);
  if (source_class && target_class) {
    view.kind = AssociationKind::ClassClass;
  } else if (source_class && target_iface) {
    view.kind = AssociationKind::ClassInterface;
  } else if (source_iface && target_class) {
    view.kind = AssociationKind::InterfaceClass;
  } else if (source_iface && target_iface) {
    view.kind = AssociationKind::InterfaceInterface;
  }
  return view;
}

std::vector<PortOccurrence> TypeSystem::port_occurrences() const {
  std::vector<PortOccurrence> out;
  for (const auto& cls : model_.classes) {
    const std::size_t first = out.size();
    for (const auto& port : cls.ports) out.push_back(PortOccurrence{&cls, nullptr, &cls, &port, {}});
    for (const auto& part : cls.parts) {
      const Class* type = model_.find_class(part.type);
      if (type == nullptr) continue;
      for (const auto& port : type->ports) out.push_back(PortOccurrence{&cls, &part, type, &port, {}});
    }
    for (std::size_t i = 0; i < cls.connectors.size(); ++i) {
      const auto& connector = cls.connectors[i];
      const auto origin = link_origin(cls, connector);
      if (!origin.from_port()) continue;
      const auto end = resolve_end(cls, origin.end == 1 ? connector.end1 : connector.end2);
      for (std::size_t k = first; k < out.size(); ++k) {
        if (out[k].port == end.port && out[k].part == end.part) {
          out[k].outgoing.push_back(i);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace compocheck
