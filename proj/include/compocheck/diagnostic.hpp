#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace compocheck {

enum class Severity { Error, Warning, Note };

std::string_view to_string(Severity severity);

/// One finding about a model element.
///
/// Codes are stable: E0xx for referential-integrity problems, W000..W011 for
/// the composite-structure rules, N0xx for informational notes and R0xx for
/// routing failures observed by the simulator. `subject` is an element path
/// accepted by `resolve` (`Class`, `Class.member`, `Class.part.port`,
/// `Class#connector`) or an instance path for routing findings.
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string subject;
  std::string message;
  std::vector<std::string> related;

  bool operator==(const Diagnostic&) const = default;
};

/// Orders by subject, then code, then message.
bool diagnostic_less(const Diagnostic& lhs, const Diagnostic& rhs);

void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace compocheck
