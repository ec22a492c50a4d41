#include "support/generators.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace gen {

using compocheck::Association;
using compocheck::Class;
using compocheck::ClassKind;
using compocheck::Connector;
using compocheck::EndRef;
using compocheck::Interface;
using compocheck::Model;
using compocheck::Part;
using compocheck::Port;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

Interface make_interface(std::string name, std::vector<std::string> generals = {}, bool group = false) {
  Interface iface;
  iface.name = std::move(name);
  iface.generals = std::move(generals);
  iface.is_group = group;
  if (!group) iface.operations.push_back("op" + iface.name);
  return iface;
}

Connector link(EndRef a, EndRef b, std::optional<std::string> association = std::nullopt) {
  Connector c;
  c.end1 = std::move(a);
  c.end2 = std::move(b);
  c.association = std::move(association);
  return c;
}

template <typename T>
std::vector<T> sample(Rng& rng, const std::vector<T>& items, double p) {
  std::vector<T> out;
  for (const auto& item : items) {
    if (chance(rng, p)) out.push_back(item);
  }
  return out;
}

}  // namespace

Model hierarchy(Rng& rng, int max_classifiers) {
  Model model;
  const int total = uniform(rng, 2, max_classifiers);
  const int interfaces = uniform(rng, 1, total - 1);
  std::vector<std::string> iface_names;
  for (int i = 0; i < interfaces; ++i) {
    auto name = "I" + std::to_string(i);
    if (iface_names.size() >= 2 && chance(rng, 0.25)) {
      auto generals = sample(rng, iface_names, 0.5);
      while (generals.size() < 2) {
        const auto& pick = iface_names[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(iface_names.size()) - 1))];
        if (std::find(generals.begin(), generals.end(), pick) == generals.end()) generals.push_back(pick);
      }
      model.interfaces.push_back(make_interface(name, generals, true));
    } else {
      model.interfaces.push_back(make_interface(name, sample(rng, iface_names, 0.3)));
    }
    iface_names.push_back(name);
  }
  std::vector<std::string> class_names;
  for (int i = 0; i < total - interfaces; ++i) {
    Class cls;
    cls.name = "C" + std::to_string(i);
    cls.generals = sample(rng, class_names, 0.3);
    cls.realizes = sample(rng, iface_names, 0.25);
    const int ports = uniform(rng, 0, 2);
    for (int k = 0; k < ports; ++k) {
      Port port;
      port.name = "p" + std::to_string(k);
      port.contract = iface_names[static_cast<std::size_t>(uniform(rng, 0, interfaces - 1))];
      port.reversed = chance(rng, 0.5);
      cls.ports.push_back(port);
    }
    class_names.push_back(cls.name);
    model.classes.push_back(std::move(cls));
  }
  std::shuffle(model.interfaces.begin(), model.interfaces.end(), rng);
  std::shuffle(model.classes.begin(), model.classes.end(), rng);
  return model;
}

Model port_fan(Rng& rng, int universe) {
  Model model;
  std::vector<std::string> names;
  for (int i = 0; i < universe; ++i) {
    names.push_back("U" + std::to_string(i));
    model.interfaces.push_back(make_interface(names.back()));
  }
  int groups = 0;
  auto contract = [&](std::vector<std::string> members) {
    if (members.size() == 1) return members.front();
    auto name = "G" + std::to_string(groups++);
    model.interfaces.push_back(make_interface(name, members, true));
    return name;
  };
  auto subset = [&]() {
    std::vector<std::string> members;
    while (members.empty()) members = sample(rng, names, uniform(rng, 1, 6) / 10.0);
    return members;
  };

  Class hub;
  hub.name = "Hub";
  hub.ports.push_back(Port{"p", contract(subset()), false, {}});
  const int links = uniform(rng, 2, 5);
  const int typed = chance(rng, 0.2) ? uniform(rng, 0, links - 1) : -1;
  for (int i = 0; i < links; ++i) {
    const auto members = subset();
    Class part_class;
    part_class.name = "X" + std::to_string(i);
    part_class.realizes = members;
    part_class.ports.push_back(Port{"q", contract(members), false, {}});
    const auto part = "x" + std::to_string(i);
    hub.parts.push_back(Part{part, part_class.name, 1, {}});
    std::optional<std::string> association;
    if (i == typed) association = "deleg_" + members.front();
    hub.connectors.push_back(link(EndRef::of_self_port("p"), EndRef::of_part_port(part, "q"), association));
    model.classes.push_back(std::move(part_class));
  }
  model.classes.push_back(std::move(hub));
  return model;
}

namespace {

struct Pending {
  std::string part;
  std::string port;
  std::string iface;
};

class WellFormedBuilder {
 public:
  explicit WellFormedBuilder(Rng& rng) : rng_(rng) {}

  Model build() {
    const auto kind = chance(rng_, 0.5) ? ClassKind::Active : ClassKind::Passive;
    std::vector<std::vector<std::string>> provided;
    const int ports = uniform(rng_, 1, 2);
    for (int i = 0; i < ports; ++i) provided.push_back(fresh_interfaces(uniform(rng_, 1, 3)));
    std::vector<std::pair<std::string, std::string>> exposed;
    model_.root = composite(kind, provided, 0, exposed);
    return std::move(model_);
  }

 private:
  std::string fresh(const std::string& prefix) { return prefix + std::to_string(counter_++); }

  std::vector<std::string> fresh_interfaces(int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) {
      out.push_back(fresh("I"));
      model_.interfaces.push_back(make_interface(out.back()));
    }
    return out;
  }

  std::string contract(const std::vector<std::string>& members) {
    if (members.size() == 1) return members.front();
    auto name = fresh("G");
    model_.interfaces.push_back(make_interface(name, members, true));
    return name;
  }

  ClassKind child_kind(ClassKind parent, bool leaf) {
    if (parent == ClassKind::Passive) return ClassKind::Passive;
    return leaf && chance(rng_, 0.3) ? ClassKind::Protected : ClassKind::Active;
  }

  std::string leaf(ClassKind kind, const std::vector<std::string>& realizes, bool with_port) {
    Class cls;
    cls.name = fresh("K");
    cls.kind = kind;
    cls.realizes = realizes;
    if (with_port) cls.ports.push_back(Port{"q", contract(realizes), false, {}});
    model_.classes.push_back(std::move(cls));
    return model_.classes.back().name;
  }

  Class& class_named(const std::string& name) {
    return *std::find_if(model_.classes.begin(), model_.classes.end(), [&](const Class& c) { return c.name == name; });
  }

  std::string composite(ClassKind kind, const std::vector<std::vector<std::string>>& provided, int depth,
                        std::vector<std::pair<std::string, std::string>>& exposed) {
    Class cls;
    cls.name = fresh("K");
    cls.kind = kind;
    std::vector<Pending> pending;

    for (std::size_t k = 0; k < provided.size(); ++k) {
      const auto port = "p" + std::to_string(k);
      cls.ports.push_back(Port{port, contract(provided[k]), false, {}});
      auto members = provided[k];
      std::shuffle(members.begin(), members.end(), rng_);
      std::size_t begin = 0;
      while (begin < members.size()) {
        const auto size = static_cast<std::size_t>(uniform(rng_, 1, static_cast<int>(members.size() - begin)));
        const std::vector<std::string> chunk(members.begin() + static_cast<long>(begin),
                                             members.begin() + static_cast<long>(begin + size));
        begin += size;
        const auto part = fresh("x");
        const int choice = uniform(rng_, 0, depth < 3 ? 2 : 1);
        if (choice == 2) {
          std::vector<std::pair<std::string, std::string>> inner;
          const auto child_kind_ = child_kind(kind, false);
          const auto type = composite(child_kind_, {chunk}, depth + 1, inner);
          cls.parts.push_back(Part{part, type, 1, {}});
          cls.connectors.push_back(link(EndRef::of_self_port(port), EndRef::of_part_port(part, "p0")));
          for (auto& [name, iface] : inner) pending.push_back({part, name, iface});
          continue;
        }
        const bool with_port = choice == 1;
        const auto type = leaf(child_kind(kind, true), chunk, with_port);
        const int multiplicity = chance(rng_, 0.15) ? 2 : 1;
        cls.parts.push_back(Part{part, type, multiplicity, {}});
        cls.connectors.push_back(link(EndRef::of_self_port(port),
                                      with_port ? EndRef::of_part_port(part, "q") : EndRef::of_part(part)));
        if (chance(rng_, 0.4)) {
          const auto needed = fresh_interfaces(1).front();
          auto& leaf_class = class_named(type);
          leaf_class.usages.push_back(needed);
          leaf_class.ports.push_back(Port{"r", needed, true, {}});
          pending.push_back({part, "r", needed});
        }
        if (chance(rng_, 0.15)) {
          // A part that reaches the outside through a typed link.
          const auto needed = fresh_interfaces(1).front();
          const auto self_port = fresh("rz");
          const auto association = fresh("its");
          cls.ports.push_back(Port{self_port, needed, true, {}});
          Association assoc;
          assoc.name = association;
          assoc.end1 = {type, false};
          assoc.end2 = {needed, true};
          model_.associations.push_back(assoc);
          cls.connectors.push_back(link(EndRef::of_part(part), EndRef::of_self_port(self_port), association));
          exposed.emplace_back(self_port, needed);
        }
      }
    }

    for (const auto& need : pending) {
      const int choice = uniform(rng_, 0, 2);
      const auto from = EndRef::of_part_port(need.part, need.port);
      if (choice == 2) {
        const auto self_port = fresh("rq");
        cls.ports.push_back(Port{self_port, need.iface, true, {}});
        cls.connectors.push_back(link(from, EndRef::of_self_port(self_port)));
        exposed.emplace_back(self_port, need.iface);
        continue;
      }
      const auto sibling = fresh("s");
      const auto type = leaf(child_kind(kind, true), {need.iface}, choice == 0);
      cls.parts.push_back(Part{sibling, type, chance(rng_, 0.15) ? 2 : 1, {}});
      cls.connectors.push_back(link(from, choice == 0 ? EndRef::of_part_port(sibling, "q") : EndRef::of_part(sibling)));
    }

    const auto name = cls.name;
    model_.classes.push_back(std::move(cls));
    return name;
  }

  Rng& rng_;
  Model model_;
  int counter_ = 0;
};

}  // namespace

Model well_formed(Rng& rng) { return WellFormedBuilder(rng).build(); }

Model relay_chain(int length) {
  Model model;
  model.interfaces.push_back(make_interface("I"));
  for (int i = 0; i < length; ++i) {
    Class cls;
    cls.name = "C" + std::to_string(i);
    cls.ports.push_back(Port{"p", "I", false, {}});
    if (i + 1 < length) {
      cls.parts.push_back(Part{"c", "C" + std::to_string(i + 1), 1, {}});
      cls.connectors.push_back(link(EndRef::of_self_port("p"), EndRef::of_part_port("c", "p")));
    } else {
      cls.realizes.push_back("I");
    }
    model.classes.push_back(std::move(cls));
  }
  model.root = "C0";
  return model;
}

Model drop_connector(const Model& model, const std::string& owner, std::size_t index) {
  Model out = model;
  for (auto& cls : out.classes) {
    if (cls.name == owner && index < cls.connectors.size()) {
      cls.connectors.erase(cls.connectors.begin() + static_cast<long>(index));
    }
  }
  return out;
}

}  // namespace gen
