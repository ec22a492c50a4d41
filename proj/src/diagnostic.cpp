#include "compocheck/diagnostic.hpp"

#include <algorithm>
#include <tuple>

namespace compocheck {

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Error:
      return "error";
    case Severity::Warning:
      return "warning";
    case Severity::Note:
      return "note";
  }
  return "error";
}

bool diagnostic_less(const Diagnostic& lhs, const Diagnostic& rhs) {
  return std::tie(lhs.subject, lhs.code, lhs.message, lhs.related) <
         std::tie(rhs.subject, rhs.code, rhs.message, rhs.related);
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(), diagnostic_less);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace compocheck
