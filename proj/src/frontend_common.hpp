#pragma once

// Shared internals of the two configuration parsers: mapping model-level
// violations onto located parse diagnostics.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "depl/config_model.hpp"
#include "depl/diagnostics.hpp"

namespace depl::frontend {

/// Maps a validation code onto the parser diagnostic vocabulary.
inline std::string semantic_code(const std::string& violation_code) {
  if (violation_code.rfind("DUPLICATE", 0) == 0 ||
      violation_code == violation::kAmbiguousBinding) {
    return diag::kDuplicate;
  }
  if (violation_code.rfind("UNKNOWN", 0) == 0) return diag::kUnresolved;
  return diag::kInvalid;
}

/// Runs validate() over a freshly built configuration and appends one
/// diagnostic per violation, located via the subject table the parser
/// filled while reading (falling back to 1:1 for subjects it never saw).
inline void append_semantic_diagnostics(
    const Configuration& config,
    const std::map<std::string, SourceLocation>& subject_locations,
    std::vector<ParseDiagnostic>& diagnostics) {
  for (const Violation& violation : validate(config)) {
    SourceLocation location;
    auto it = subject_locations.find(violation.subject);
    if (it != subject_locations.end()) location = it->second;
    diagnostics.push_back(
        {semantic_code(violation.code), location, violation.detail});
  }
}

/// Stable order for reporting: by position in the input.
inline void sort_by_location(std::vector<ParseDiagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [](const ParseDiagnostic& a, const ParseDiagnostic& b) {
                     if (a.location.line != b.location.line)
                       return a.location.line < b.location.line;
                     return a.location.column < b.location.column;
                   });
}

}  // namespace depl::frontend
