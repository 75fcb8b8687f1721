#pragma once

#include <string>
#include <vector>

namespace depl {

/// 1-based position inside a source text.
struct SourceLocation {
  int line = 1;
  int column = 1;

  bool operator==(const SourceLocation&) const = default;
};

namespace diag {
inline constexpr const char* kSyntax = "SYNTAX";
inline constexpr const char* kUnresolved = "UNRESOLVED";
inline constexpr const char* kDuplicate = "DUPLICATE";
inline constexpr const char* kUnsupportedElement = "UNSUPPORTED_ELEMENT";
inline constexpr const char* kInvalid = "INVALID";
}  // namespace diag

/// One problem found while reading a configuration text.
struct ParseDiagnostic {
  std::string code;  ///< one of the diag:: constants
  SourceLocation location;
  std::string message;

  bool operator==(const ParseDiagnostic&) const = default;
};

inline std::string format_diagnostic(const ParseDiagnostic& diagnostic,
                                     const std::string& file_name) {
  return "error: " + file_name + ":" + std::to_string(diagnostic.location.line) +
         ":" + std::to_string(diagnostic.location.column) + ": [" +
         diagnostic.code + "] " + diagnostic.message;
}

/// Outcome of parsing: a value plus any diagnostics. The value is usable
/// only when ok() — parsers stop at the first unrecoverable problem but may
/// report several diagnostics for one input.
template <typename T>
struct ParseResult {
  T value{};
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

}  // namespace depl
