#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "compocheck/model.hpp"

namespace compocheck {

/// Interface names, kept sorted so every derived set prints deterministically.
using InterfaceSet = std::set<std::string, std::less<>>;

std::string to_string(const InterfaceSet& set);  // "{I, J, L}"

enum class LinkKind {
  AssemblyPartPart,
  InboundDelegationPortPort,
  OutboundDelegationPortPort,
  AssemblyPortPort,
  AssemblyPartProvidedPort,
  AssemblyPartRequiredPort,
  InboundDelegationPartPort,
  OutboundDelegationPartPort,
  Forbidden,
};

std::string_view to_string(LinkKind kind);

enum class EndShape { Part, PartPort, SelfPort, Invalid };

/// A connector end with its references looked up in the owning class.
struct ResolvedEnd {
  EndShape shape = EndShape::Invalid;
  const Part* part = nullptr;
  const Class* part_type = nullptr;
  const Port* port = nullptr;

  bool is_port() const { return port != nullptr; }
  bool is_required_port() const { return port != nullptr && port->reversed; }
  bool is_provided_port() const { return port != nullptr && !port->reversed; }
};

enum class OriginKind { FromProvidedPort, FromRequiredPort, FromPart, Undirected };

std::string_view to_string(OriginKind kind);

/// Where requests enter a connector. `end` is 1 or 2, or 0 when undirected.
struct LinkOrigin {
  OriginKind kind = OriginKind::Undirected;
  int end = 0;

  bool operator==(const LinkOrigin&) const = default;
  bool from_port() const { return kind == OriginKind::FromProvidedPort || kind == OriginKind::FromRequiredPort; }
};

/// The dynamic type of a connector. Not computable for links that start at a
/// part: those must carry their type in an association instead.
struct TransportedSet {
  InterfaceSet interfaces;
  bool computable = false;

  bool operator==(const TransportedSet&) const = default;
};

enum class AssociationKind { ClassClass, ClassInterface, InterfaceClass, InterfaceInterface, Unresolved };

/// An association read in its navigation direction: `target` is the
/// navigable end (the type the association points at) and `source` the other.
/// For bidirectional or non-navigable associations the declared order is kept.
struct AssociationView {
  const Association* association = nullptr;
  const AssociationEnd* source = nullptr;
  const AssociationEnd* target = nullptr;
  bool bidirectional = false;
  bool navigable_nowhere = false;
  AssociationKind kind = AssociationKind::Unresolved;
};

/// A port as seen from one composite: either the composite's own port
/// (`part == nullptr`) or the port of one of its parts.
struct PortOccurrence {
  const Class* context = nullptr;
  const Part* part = nullptr;
  const Class* declaring = nullptr;
  const Port* port = nullptr;
  std::vector<std::size_t> outgoing;  // connectors of `context` that start here

  std::string path() const;
};

/// Derived typing over an integrity-clean model: generalization closures,
/// interface sets, link classification and transported interfaces.
///
/// All closures are computed once at construction, so a TypeSystem is
/// immutable and safe to share between threads. It keeps a reference to the
/// model, which must outlive it.
class TypeSystem {
 public:
  explicit TypeSystem(const Model& model);

  const Model& model() const { return model_; }

  /// Transitive generals of a class or interface, excluding itself.
  const InterfaceSet& parents_of(std::string_view classifier) const;

  /// The interface with its parents, interface groups removed.
  InterfaceSet interface_closure(std::string_view interface_name) const;

  /// Interfaces a class realizes directly or through its parents and the
  /// parents of realized interfaces, interface groups removed.
  const InterfaceSet& class_interfaces(std::string_view class_name) const;

  InterfaceSet classifier_interfaces(std::string_view classifier) const;

  /// The same closure for provided and required ports; only the `reversed`
  /// flag tells them apart.
  InterfaceSet port_interfaces(const Port& port) const { return interface_closure(port.contract); }

  /// Whether a link end typed `sub` fits an association end typed `super`.
  bool classifier_compatible(std::string_view sub, std::string_view super) const;

  /// Whether the port carries every interface of the (interface) type.
  bool port_compatible(const Port& port, std::string_view type) const;

  ResolvedEnd resolve_end(const Class& owner, const EndRef& end) const;
  LinkKind classify_link(const Class& owner, const Connector& connector) const;
  LinkOrigin link_origin(const Class& owner, const Connector& connector) const;
  TransportedSet transported_interfaces(const Class& owner, const Connector& connector) const;

  AssociationView view_association(const Association& association) const;
  const Association* association_of(const Connector& connector) const;

  /// Every port occurrence of every class, in declaration order, with the
  /// connectors that originate at it.
  std::vector<PortOccurrence> port_occurrences() const;

 private:
  const Model& model_;
  std::map<std::string, InterfaceSet, std::less<>> parents_;
  std::map<std::string, InterfaceSet, std::less<>> class_interfaces_;
};

bool is_delegation(LinkKind kind);

}  // namespace compocheck
