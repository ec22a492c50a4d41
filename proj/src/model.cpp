#include "compocheck/model.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace compocheck {

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    if (i != 0) out << "; ";
    out << diagnostics[i].code << ' ' << diagnostics[i].subject << ": " << diagnostics[i].message;
  }
  return out.str();
}

Diagnostic error(std::string code, std::string subject, std::string message,
                 std::vector<std::string> related = {}) {
  return Diagnostic{std::move(code), Severity::Error, std::move(subject), std::move(message), std::move(related)};
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> pieces;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      pieces.push_back(text.substr(start));
      return pieces;
    }
    pieces.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

class IntegrityChecker {
 public:
  explicit IntegrityChecker(const Model& model) : model_(model) {}

  std::vector<Diagnostic> run() {
    check_names();
    for (const auto& iface : model_.interfaces) check_interface(iface);
    for (const auto& cls : model_.classes) check_class(cls);
    for (const auto& assoc : model_.associations) check_association(assoc);
    check_generalization_cycles();
    if (model_.root) {
      if (model_.is_interface(*model_.root)) {
        out_.push_back(error("E009", *model_.root, "root '" + *model_.root + "' is an interface, not a class"));
      } else if (!model_.is_class(*model_.root)) {
        out_.push_back(error("E001", *model_.root, "root class '" + *model_.root + "' is not declared"));
      }
    }
    sort_diagnostics(out_);
    return std::move(out_);
  }

 private:
  void check_names() {
    std::set<std::string> classifiers;
    auto claim = [&](const std::string& name) {
      if (!classifiers.insert(name).second) {
        out_.push_back(error("E002", name, "classifier name '" + name + "' is declared more than once"));
      }
    };
    for (const auto& iface : model_.interfaces) claim(iface.name);
    for (const auto& cls : model_.classes) claim(cls.name);

    std::set<std::string> associations;
    for (const auto& assoc : model_.associations) {
      if (!associations.insert(assoc.name).second) {
        out_.push_back(error("E002", assoc.name, "association name '" + assoc.name + "' is declared more than once"));
      }
    }
  }

  // Reference that must name an interface.
  void expect_interface(const std::string& subject, const std::string& name, std::string_view role) {
    if (model_.is_interface(name)) return;
    if (model_.is_class(name)) {
      out_.push_back(error("E009", subject, std::string(role) + " '" + name + "' is a class, expected an interface"));
    } else {
      out_.push_back(error("E001", subject, std::string(role) + " '" + name + "' is not declared"));
    }
  }

  void expect_class(const std::string& subject, const std::string& name, std::string_view role) {
    if (model_.is_class(name)) return;
    if (model_.is_interface(name)) {
      out_.push_back(error("E009", subject, std::string(role) + " '" + name + "' is an interface, expected a class"));
    } else {
      out_.push_back(error("E001", subject, std::string(role) + " '" + name + "' is not declared"));
    }
  }

  void expect_classifier(const std::string& subject, const std::string& name, std::string_view role) {
    if (!model_.is_interface(name) && !model_.is_class(name)) {
      out_.push_back(error("E001", subject, std::string(role) + " '" + name + "' is not declared"));
    }
  }

  void check_interface(const Interface& iface) {
    for (const auto& general : iface.generals) expect_interface(iface.name, general, "general");
    if (iface.is_group && iface.generals.size() < 2) {
      out_.push_back(error("E008", iface.name,
                           "interface group '" + iface.name + "' must bundle at least two interfaces"));
    }
  }

  void check_class(const Class& cls) {
    for (const auto& general : cls.generals) expect_class(cls.name, general, "general");
    for (const auto& iface : cls.realizes) expect_interface(cls.name, iface, "realized interface");
    for (const auto& iface : cls.usages) expect_interface(cls.name, iface, "used interface");

    std::set<std::string> members;
    auto claim = [&](const std::string& name) {
      if (!members.insert(name).second) {
        out_.push_back(error("E002", cls.name + "." + name,
                             "member name '" + name + "' is declared more than once in class '" + cls.name + "'"));
      }
    };
    for (const auto& attr : cls.attributes) {
      claim(attr.name);
      expect_classifier(cls.name + "." + attr.name, attr.type, "attribute type");
    }
    for (const auto& part : cls.parts) {
      claim(part.name);
      const auto subject = cls.name + "." + part.name;
      expect_class(subject, part.type, "part type");
      if (part.multiplicity < 1) {
        out_.push_back(error("E007", subject, "part multiplicity must be at least 1"));
      }
    }
    for (const auto& port : cls.ports) {
      claim(port.name);
      expect_interface(cls.name + "." + port.name, port.contract, "port contract");
    }
    for (std::size_t i = 0; i < cls.connectors.size(); ++i) check_connector(cls, i);
  }

  void check_end(const Class& owner, const std::string& subject, const EndRef& end, std::string_view label) {
    const std::string which(label);
    if (!end.part && !end.port) {
      out_.push_back(error("E006", subject, which + " names neither a part nor a port"));
      return;
    }
    if (!end.part) {
      if (owner.find_port(*end.port) == nullptr) {
        out_.push_back(error("E006", subject,
                             which + " refers to port '" + *end.port + "' which class '" + owner.name + "' does not own"));
      }
      return;
    }
    const Part* part = owner.find_part(*end.part);
    if (part == nullptr) {
      out_.push_back(error("E006", subject,
                           which + " refers to part '" + *end.part + "' which class '" + owner.name + "' does not own"));
      return;
    }
    if (!end.port) return;
    const Class* type = model_.find_class(part->type);
    if (type == nullptr) return;  // reported on the part
    if (type->find_port(*end.port) == nullptr) {
      out_.push_back(error("E006", subject,
                           which + " refers to port '" + *end.port + "' which part type '" + type->name +
                               "' does not own"));
    }
  }

  void check_connector(const Class& owner, std::size_t index) {
    const auto& connector = owner.connectors[index];
    const auto subject = connector_path(owner, index);
    check_end(owner, subject, connector.end1, "first end");
    check_end(owner, subject, connector.end2, "second end");
    if (connector.association && model_.find_association(*connector.association) == nullptr &&
        !names_default_deleg(*connector.association)) {
      out_.push_back(error("E001", subject, "association '" + *connector.association + "' is not declared"));
    }
  }

  // deleg_I is available for every plain interface I even before synthesis.
  bool names_default_deleg(const std::string& name) const {
    constexpr std::string_view prefix = "deleg_";
    if (name.rfind(prefix, 0) != 0) return false;
    const Interface* iface = model_.find_interface(name.substr(prefix.size()));
    return iface != nullptr && !iface->is_group;
  }

  void check_association(const Association& assoc) {
    expect_classifier(assoc.name, assoc.end1.type, "end type");
    expect_classifier(assoc.name, assoc.end2.type, "end type");
    constexpr std::string_view prefix = "deleg_";
    if (assoc.name.rfind(prefix, 0) != 0) return;
    const auto target = assoc.name.substr(prefix.size());
    const Interface* iface = model_.find_interface(target);
    if (iface == nullptr || iface->is_group) return;
    const bool shape_ok = assoc.end1.type == target && assoc.end2.type == target && assoc.end2.navigable;
    if (!shape_ok) {
      out_.push_back(error("E004", assoc.name,
                           "'" + assoc.name + "' is reserved for the default delegation association of '" + target +
                               "' and must be " + target + " -> " + target + " navigable at its second end"));
    }
  }

  const std::vector<std::string>* generals_of(const std::string& name) const {
    if (const Class* cls = model_.find_class(name)) return &cls->generals;
    if (const Interface* iface = model_.find_interface(name)) return &iface->generals;
    return nullptr;
  }

  void check_generalization_cycles() {
    enum class Mark { White, Grey, Black };
    std::map<std::string, Mark> marks;
    std::vector<std::string> stack;
    std::set<std::set<std::string>> reported;

    std::function<void(const std::string&)> visit = [&](const std::string& node) {
      marks[node] = Mark::Grey;
      stack.push_back(node);
      if (const auto* generals = generals_of(node)) {
        for (const auto& next : *generals) {
          if (generals_of(next) == nullptr) continue;
          const auto mark = marks.count(next) != 0 ? marks[next] : Mark::White;
          if (mark == Mark::White) {
            visit(next);
          } else if (mark == Mark::Grey) {
            auto first = std::find(stack.begin(), stack.end(), next);
            std::set<std::string> members(first, stack.end());
            if (reported.insert(members).second) {
              std::vector<std::string> related(members.begin(), members.end());
              std::string names;
              for (const auto& member : related) {
                if (!names.empty()) names += ", ";
                names += member;
              }
              out_.push_back(error("E003", *members.begin(), "generalization cycle through " + names, related));
            }
          }
        }
      }
      stack.pop_back();
      marks[node] = Mark::Black;
    };

    for (const auto& iface : model_.interfaces) {
      if (marks[iface.name] == Mark::White) visit(iface.name);
    }
    for (const auto& cls : model_.classes) {
      if (marks[cls.name] == Mark::White) visit(cls.name);
    }
  }

  const Model& model_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::string_view to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::Passive:
      return "passive";
    case ClassKind::Active:
      return "active";
    case ClassKind::Protected:
      return "protected";
    case ClassKind::Observer:
      return "observer";
  }
  return "passive";
}

std::optional<ClassKind> class_kind_from_string(std::string_view text) {
  if (text == "passive") return ClassKind::Passive;
  if (text == "active") return ClassKind::Active;
  if (text == "protected") return ClassKind::Protected;
  if (text == "observer") return ClassKind::Observer;
  return std::nullopt;
}

std::string to_string(const EndRef& end) {
  if (end.part && end.port) return *end.part + "." + *end.port;
  if (end.part) return *end.part;
  if (end.port) return "self." + *end.port;
  return "<empty>";
}

const Part* Class::find_part(std::string_view part_name) const {
  auto it = std::find_if(parts.begin(), parts.end(), [&](const Part& p) { return p.name == part_name; });
  return it == parts.end() ? nullptr : &*it;
}

const Port* Class::find_port(std::string_view port_name) const {
  auto it = std::find_if(ports.begin(), ports.end(), [&](const Port& p) { return p.name == port_name; });
  return it == ports.end() ? nullptr : &*it;
}

const Class* Model::find_class(std::string_view name) const {
  auto it = std::find_if(classes.begin(), classes.end(), [&](const Class& c) { return c.name == name; });
  return it == classes.end() ? nullptr : &*it;
}

const Interface* Model::find_interface(std::string_view name) const {
  auto it = std::find_if(interfaces.begin(), interfaces.end(), [&](const Interface& i) { return i.name == name; });
  return it == interfaces.end() ? nullptr : &*it;
}

const Association* Model::find_association(std::string_view name) const {
  auto it =
      std::find_if(associations.begin(), associations.end(), [&](const Association& a) { return a.name == name; });
  return it == associations.end() ? nullptr : &*it;
}

ModelError::ModelError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate_integrity(const Model& model) { return IntegrityChecker(model).run(); }

std::string deleg_association_name(std::string_view interface_name) {
  return "deleg_" + std::string(interface_name);
}

Model synthesize_deleg_associations(const Model& model) {
  Model result = model;
  std::vector<Diagnostic> conflicts;
  for (const auto& iface : model.interfaces) {
    if (iface.is_group) continue;
    const auto name = deleg_association_name(iface.name);
    if (const Association* existing = model.find_association(name)) {
      const bool shape_ok =
          existing->end1.type == iface.name && existing->end2.type == iface.name && existing->end2.navigable;
      if (!shape_ok) {
        conflicts.push_back(error("E004", name, "'" + name + "' does not have the " + iface.name + " -> " +
                                                    iface.name + " shape required of a delegation association"));
      }
      continue;
    }
    Association assoc;
    assoc.name = name;
    assoc.end1 = AssociationEnd{iface.name, false};
    assoc.end2 = AssociationEnd{iface.name, true};
    assoc.synthesized = true;
    result.associations.push_back(std::move(assoc));
  }
  if (!conflicts.empty()) throw ModelError(std::move(conflicts));
  return result;
}

std::string connector_path(const Class& owner, std::size_t index) {
  return owner.name + "#" + std::to_string(index);
}

Element resolve(const Model& model, std::string_view path) {
  auto unknown = [&]() -> ModelError {
    return ModelError({error("E005", std::string(path), "unknown element path '" + std::string(path) + "'")});
  };

  if (const auto hash = path.find('#'); hash != std::string_view::npos) {
    const Class* owner = model.find_class(path.substr(0, hash));
    const auto digits = path.substr(hash + 1);
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (owner == nullptr || digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() ||
        index >= owner->connectors.size()) {
      throw unknown();
    }
    return ConnectorRef{owner, index};
  }

  const auto segments = split(path, '.');
  if (segments.size() == 1) {
    if (const Class* cls = model.find_class(path)) return cls;
    if (const Interface* iface = model.find_interface(path)) return iface;
    if (const Association* assoc = model.find_association(path)) return assoc;
    throw unknown();
  }

  const Class* owner = model.find_class(segments[0]);
  if (owner == nullptr) throw unknown();
  if (segments.size() == 2) {
    if (const Part* part = owner->find_part(segments[1])) return PartRef{owner, part};
    if (const Port* port = owner->find_port(segments[1])) return PortRef{owner, nullptr, owner, port};
    throw unknown();
  }
  if (segments.size() == 3) {
    const Part* part = owner->find_part(segments[1]);
    if (part == nullptr) throw unknown();
    const Class* type = model.find_class(part->type);
    if (type == nullptr) throw unknown();
    const Port* port = type->find_port(segments[2]);
    if (port == nullptr) throw unknown();
    return PortRef{owner, part, type, port};
  }
  throw unknown();
}

}  // namespace compocheck
