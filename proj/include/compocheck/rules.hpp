#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "compocheck/diagnostic.hpp"
#include "compocheck/model.hpp"
#include "compocheck/type_system.hpp"

namespace compocheck {

/// Rule codes:
///
///   W000 bidirectional port              W006 void connector
///   W001 forbidden delegation link       W007 overlapping untyped links of a port
///   W002 forbidden assembly link         W008 incomplete port wiring
///   W003 association direction           W009 passive composite with non-passive part
///   W004 typed link starting at a port   W010 active composite mixing passive and active
///   W005 link starting at a part         W011 observer composite with non-observer part
///
/// Notes: N001 unwired port, N002 protected composite (no concurrency rule).
struct CheckOptions {
  std::set<std::string> downgrade;  // W codes reported as warnings instead of errors
};

struct CheckReport {
  std::vector<Diagnostic> diagnostics;
  std::map<std::string, int> stats;  // code -> count
  bool passed = true;
};

std::vector<Diagnostic> rule_unidirectional(const TypeSystem& types);
std::vector<Diagnostic> rule_link_type(const TypeSystem& types);
std::vector<Diagnostic> rule_association_direction(const TypeSystem& types);
std::vector<Diagnostic> rule_typed_from_port(const TypeSystem& types);
std::vector<Diagnostic> rule_typed_from_part(const TypeSystem& types);
std::vector<Diagnostic> rule_nonvoid(const TypeSystem& types);
std::vector<Diagnostic> rule_pairwise_disjoint(const TypeSystem& types);
std::vector<Diagnostic> rule_completeness(const TypeSystem& types);
std::vector<Diagnostic> rule_concurrency(const TypeSystem& types);
std::vector<Diagnostic> rule_observer(const TypeSystem& types);
std::vector<Diagnostic> rule_notes(const TypeSystem& types);

/// Runs every rule over an integrity-clean, synthesized model.
CheckReport check_model(const Model& model, const CheckOptions& options = {});

/// Sets of untyped links from one port are pairwise disjoint iff the size of
/// their union equals the sum of their sizes.
bool pairwise_disjoint(const std::vector<InterfaceSet>& sets);

/// Interfaces appearing in more than one of the sets.
InterfaceSet overlapping_interfaces(const std::vector<InterfaceSet>& sets);

std::string render_text(const CheckReport& report);
std::string render_json(const CheckReport& report);
std::string render_text(const Diagnostic& diagnostic);

}  // namespace compocheck
