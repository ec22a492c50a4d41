#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "compocheck/diagnostic.hpp"

namespace compocheck {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;

  bool operator==(const SourceSpan&) const = default;
};

// Where an element was declared. Positions never take part in structural
// equality, so a model read from JSON equals the same model read from DSL.
struct Provenance {
  std::optional<SourceSpan> span;

  friend bool operator==(const Provenance&, const Provenance&) { return true; }
};

enum class ClassKind { Passive, Active, Protected, Observer };

std::string_view to_string(ClassKind kind);
std::optional<ClassKind> class_kind_from_string(std::string_view text);

struct Interface {
  std::string name;
  std::vector<std::string> generals;
  bool is_group = false;
  std::vector<std::string> operations;
  Provenance origin;

  bool operator==(const Interface&) const = default;
};

/// A unidirectional port. `reversed` marks a required port; otherwise the
/// port provides its contract.
struct Port {
  std::string name;
  std::string contract;
  bool reversed = false;
  Provenance origin;

  bool operator==(const Port&) const = default;
};

struct Part {
  std::string name;
  std::string type;
  int multiplicity = 1;
  Provenance origin;

  bool operator==(const Part&) const = default;
};

/// Connector end: `part`, `part.port`, or `self.port` (port of the owning class).
struct EndRef {
  std::optional<std::string> part;
  std::optional<std::string> port;

  bool operator==(const EndRef&) const = default;

  static EndRef of_part(std::string part_name) { return {std::move(part_name), std::nullopt}; }
  static EndRef of_part_port(std::string part_name, std::string port_name) {
    return {std::move(part_name), std::move(port_name)};
  }
  static EndRef of_self_port(std::string port_name) { return {std::nullopt, std::move(port_name)}; }
};

std::string to_string(const EndRef& end);

struct Connector {
  EndRef end1;
  EndRef end2;
  std::optional<std::string> association;
  Provenance origin;

  bool operator==(const Connector&) const = default;
};

struct Attribute {
  std::string name;
  std::string type;

  bool operator==(const Attribute&) const = default;
};

struct Class {
  std::string name;
  ClassKind kind = ClassKind::Passive;
  std::vector<std::string> generals;
  std::vector<std::string> realizes;
  std::vector<std::string> usages;
  std::vector<Attribute> attributes;
  std::vector<Part> parts;
  std::vector<Port> ports;
  std::vector<Connector> connectors;
  Provenance origin;

  bool operator==(const Class&) const = default;

  bool is_composite() const { return !parts.empty(); }
  const Part* find_part(std::string_view part_name) const;
  const Port* find_port(std::string_view port_name) const;
};

struct AssociationEnd {
  std::string type;
  bool navigable = false;

  bool operator==(const AssociationEnd&) const = default;
};

struct Association {
  std::string name;
  AssociationEnd end1;
  AssociationEnd end2;
  bool synthesized = false;
  Provenance origin;

  bool operator==(const Association&) const = default;
};

struct Model {
  std::vector<Class> classes;
  std::vector<Interface> interfaces;
  std::vector<Association> associations;
  std::optional<std::string> root;

  bool operator==(const Model&) const = default;

  const Class* find_class(std::string_view name) const;
  const Interface* find_interface(std::string_view name) const;
  const Association* find_association(std::string_view name) const;
  bool is_class(std::string_view name) const { return find_class(name) != nullptr; }
  bool is_interface(std::string_view name) const { return find_interface(name) != nullptr; }
};

/// Raised for hard model errors (unknown paths, deleg name conflicts).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Referential-integrity check. Returns E0xx diagnostics; empty iff every
/// structural invariant of the model holds.
///
///   E001 dangling reference          E006 malformed connector end
///   E002 duplicate name              E007 part multiplicity below 1
///   E003 generalization cycle        E008 interface group with < 2 generals
///   E004 conflicting deleg_ name     E009 reference to the wrong kind of element
std::vector<Diagnostic> validate_integrity(const Model& model);

std::string deleg_association_name(std::string_view interface_name);

/// Adds the default `deleg_I` association for every non-group interface that
/// lacks one. Idempotent. Throws ModelError (E004) when a user association
/// named `deleg_I` does not have the I -> I shape.
Model synthesize_deleg_associations(const Model& model);

struct PartRef {
  const Class* owner = nullptr;
  const Part* part = nullptr;
};

/// A port, either on its declaring class (`Class.port`) or seen through a part
/// of a composite (`Class.part.port`, `part` non-null).
struct PortRef {
  const Class* context = nullptr;
  const Part* part = nullptr;
  const Class* declaring = nullptr;
  const Port* port = nullptr;
};

struct ConnectorRef {
  const Class* owner = nullptr;
  std::size_t index = 0;

  const Connector& connector() const { return owner->connectors.at(index); }
};

using Element = std::variant<const Class*, const Interface*, const Association*, PartRef, PortRef, ConnectorRef>;

/// Resolves `Class`, `Interface`, `association`, `Class.part`, `Class.port`,
/// `Class.part.port` or `Class#index`. Throws ModelError (E005) when unknown.
Element resolve(const Model& model, std::string_view path);

std::string connector_path(const Class& owner, std::size_t index);

}  // namespace compocheck
