#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace depl {

// ============================================================================
// Attribute values
// ============================================================================

enum class ValueKind { String, Integer, Boolean };

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> value_kind_from(std::string_view text);

/// Scalar attribute value. Constructors are spelled out so that a
/// `const char*` builds a string and never decays to bool.
class Value {
 public:
  Value() : v_(std::string{}) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::int64_t i) : v_(i) {}
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}
  Value(bool b) : v_(b) {}

  ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  std::int64_t as_integer() const { return std::get<std::int64_t>(v_); }
  bool as_boolean() const { return std::get<bool>(v_); }

  /// Literal form: strings quoted and escaped, integers decimal,
  /// booleans true/false.
  std::string to_text() const;

  bool operator==(const Value&) const = default;
  auto operator<=>(const Value&) const = default;

 private:
  std::variant<std::string, std::int64_t, bool> v_;
};

/// Quotes and escapes a string for the textual formats (\\, \", \n, \r, \t).
std::string quoted(std::string_view text);

// ============================================================================
// The abstract configuration model
// ============================================================================

struct InterfaceSignature {
  std::string name;

  bool operator==(const InterfaceSignature&) const = default;
};

enum class PortDirection { Provided, Required };

std::string_view to_string(PortDirection direction);

struct PortDecl {
  std::string name;
  PortDirection direction = PortDirection::Provided;
  std::string interface;

  bool operator==(const PortDecl&) const = default;
};

struct ComponentType {
  std::string name;
  std::vector<PortDecl> ports;
  std::map<std::string, ValueKind> attributes;
  std::string artifact;

  const PortDecl* find_port(std::string_view port_name) const;

  bool operator==(const ComponentType&) const = default;
};

struct Instance {
  std::string id;
  std::string type;
  std::string site = "local";
  std::map<std::string, Value> attribute_values;

  bool operator==(const Instance&) const = default;
};

struct Binding {
  std::string client_instance;
  std::string client_port;
  std::string server_instance;
  std::string server_port;

  /// "client.port" — unique per configuration (required ports bind once).
  std::string client_endpoint() const { return client_instance + "." + client_port; }

  bool operator==(const Binding&) const = default;
};

struct Containment {
  std::string parent;
  std::string child;
  std::string child_name;

  bool operator==(const Containment&) const = default;
};

struct Configuration {
  std::vector<InterfaceSignature> interfaces;
  std::vector<ComponentType> types;
  std::vector<Instance> instances;
  std::vector<Binding> bindings;
  std::vector<Containment> containments;

  const ComponentType* find_type(std::string_view name) const;
  const Instance* find_instance(std::string_view id) const;
  bool empty() const;

  bool operator==(const Configuration&) const = default;
};

/// Canonical element order: interfaces and types by name, instances by id,
/// bindings by client endpoint, containments by child; ports within a type
/// by name. Comparing canonical forms defines configuration equality up to
/// declaration order.
Configuration canonical(Configuration config);

// ============================================================================
// Validation
// ============================================================================

namespace violation {
inline constexpr const char* kEmptyName = "EMPTY_NAME";
inline constexpr const char* kDuplicateInterface = "DUPLICATE_INTERFACE";
inline constexpr const char* kDuplicateType = "DUPLICATE_TYPE";
inline constexpr const char* kDuplicatePort = "DUPLICATE_PORT";
inline constexpr const char* kDuplicateInstance = "DUPLICATE_INSTANCE";
inline constexpr const char* kUnknownInterface = "UNKNOWN_INTERFACE";
inline constexpr const char* kUnknownType = "UNKNOWN_TYPE";
inline constexpr const char* kUnknownAttribute = "UNKNOWN_ATTRIBUTE";
inline constexpr const char* kValueKindMismatch = "VALUE_KIND_MISMATCH";
inline constexpr const char* kUnknownInstance = "UNKNOWN_INSTANCE";
inline constexpr const char* kUnknownPort = "UNKNOWN_PORT";
inline constexpr const char* kBindingDirection = "BINDING_DIRECTION";
inline constexpr const char* kInterfaceMismatch = "INTERFACE_MISMATCH";
inline constexpr const char* kAmbiguousBinding = "AMBIGUOUS_BINDING";
inline constexpr const char* kSelfContainment = "SELF_CONTAINMENT";
inline constexpr const char* kMultipleParents = "MULTIPLE_PARENTS";
inline constexpr const char* kDuplicateContainment = "DUPLICATE_CONTAINMENT";
inline constexpr const char* kDuplicateChildName = "DUPLICATE_CHILD_NAME";
inline constexpr const char* kContainmentCycle = "CONTAINMENT_CYCLE";
}  // namespace violation

struct Violation {
  std::string code;     ///< one of the violation:: constants
  std::string subject;  ///< identifier of the offending element
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Checks every model invariant and reports all violations found.
/// Pure and deterministic; an empty report means the configuration is
/// well-formed. Violations are data, not failures.
std::vector<Violation> validate(const Configuration& config);

}  // namespace depl
