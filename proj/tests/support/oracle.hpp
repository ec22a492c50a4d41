#pragma once

// Brute-force reference implementations used to cross-check the library.
// They deliberately share no code with it: closures come from a boolean
// reachability matrix iterated to a fixpoint, set operations from
// membership tests over the whole interface universe.

#include <set>
#include <string>
#include <vector>

#include "compocheck/model.hpp"

namespace oracle {

using Names = std::set<std::string>;

class Closures {
 public:
  explicit Closures(const compocheck::Model& model);

  Names parents(const std::string& classifier) const;
  Names interface_closure(const std::string& iface) const;
  Names class_interfaces(const std::string& cls) const;
  Names port_interfaces(const compocheck::Port& port) const { return interface_closure(port.contract); }

  /// Interfaces present in both end sets of an untyped, non part-part link,
  /// found by testing every interface of the model against each end.
  Names transported_untyped(const compocheck::Class& owner, const compocheck::Connector& connector) const;

 private:
  bool reaches(int from, int to) const { return reach_[from][to]; }
  int index_of(const std::string& name) const;
  bool plain_interface(int index) const;

  const compocheck::Model& model_;
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> reach_;
};

/// Pairwise disjointness checked pair by pair.
bool pairwise_disjoint(const std::vector<Names>& sets);

/// Expected classification of a link from its end shapes, read straight off
/// the table of link kinds.
std::string expected_link_kind(const std::string& shape1, bool reversed1, const std::string& shape2, bool reversed2);

}  // namespace oracle
