#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "depl/config_model.hpp"
#include "depl/result.hpp"

namespace depl {

// ============================================================================
// The deployment plan: a graph of elementary tasks
// ============================================================================

enum class TaskKind {
  Installation,
  Instantiation,
  AttributeSetter,
  BindingGetter,
  BindingSetter,
  AddComponent,
  Initialization,
};

std::string_view to_string(TaskKind kind);

/// What one task hands to the next: a factory, an instance, a provided-port
/// reference, or the done-signal of a configuration step.
enum class InterfaceKind {
  FactoryProvider,
  InstanceProvider,
  BindingProvider,
  InstanceConfiguration,
};

std::string_view to_string(InterfaceKind kind);

/// Distinguishes the two instance inputs of an AddComponent task; None for
/// every other edge.
enum class EdgeRole { None, Parent, Child };

std::string_view to_string(EdgeRole role);

/// Installation tasks act on a (type, site) pair; every other kind acts on
/// an instance.
struct TypeSite {
  std::string type;
  std::string site;

  std::string label() const { return type + "@" + site; }

  bool operator==(const TypeSite&) const = default;
};

using TaskTarget = std::variant<std::string, TypeSite>;

std::string target_label(const TaskTarget& target);

struct TaskNode {
  /// "<kind>/<target>[/<name>]" — stable, unique within a graph. The
  /// BindingGetter id additionally carries the client endpoint, since one
  /// provided port may serve several bindings.
  std::string id;
  TaskKind kind = TaskKind::Installation;
  TaskTarget target;
  /// Attribute name, provided-port name, required-port name, or child name
  /// — present exactly for AttributeSetter, BindingGetter, BindingSetter,
  /// and AddComponent.
  std::optional<std::string> name_param;
  /// Present exactly for AttributeSetter.
  std::optional<Value> value_param;

  bool operator==(const TaskNode&) const = default;
};

struct DependencyEdge {
  std::string from;  ///< provider task id
  std::string to;    ///< consumer task id
  InterfaceKind interface_kind = InterfaceKind::FactoryProvider;
  EdgeRole role = EdgeRole::None;

  bool operator==(const DependencyEdge&) const = default;
};

struct TaskGraph {
  std::vector<TaskNode> nodes;        ///< sorted by id
  std::vector<DependencyEdge> edges;  ///< sorted by (from, to, interface)

  const TaskNode* find(std::string_view id) const;

  bool operator==(const TaskGraph&) const = default;
};

struct BackendCapabilities {
  std::string backend_name;
  bool supports_hierarchy = false;
};

// ============================================================================
// Compilation
// ============================================================================

namespace compile_error {
inline constexpr const char* kHierarchyUnsupported = "HIERARCHY_UNSUPPORTED";
inline constexpr const char* kInvalidConfig = "INVALID_CONFIG";
}  // namespace compile_error

/// Compiles a valid configuration into its task graph:
///   - one Installation per distinct (type, site) in use;
///   - one Instantiation per instance, fed by its Installation;
///   - one AttributeSetter per assigned attribute, fed by its Instantiation;
///   - per binding, a BindingGetter on the server side and a BindingSetter
///     on the client side, the setter fed by both its Instantiation and the
///     getter;
///   - one AddComponent per containment, fed by the parent's and the
///     child's Instantiations;
///   - one Initialization per instance, fed by its Instantiation and by
///     every configuration step touching that instance (an AddComponent
///     touches both parent and child).
///
/// The result is acyclic by construction and deterministic including ids.
/// Fails with HIERARCHY_UNSUPPORTED when the configuration has containments
/// but the capabilities do not allow hierarchy, and with INVALID_CONFIG
/// when the configuration does not validate. Capabilities never change the
/// shape of a successful compile.
Result<TaskGraph> compile(const Configuration& config,
                          const BackendCapabilities& caps);

/// Renders the graph in DOT: one statement per node (labeled
/// "kind:target[:name]") and per edge (labeled with its interface kind),
/// each sorted, so output is byte-reproducible. An empty graph renders as
/// "digraph plan {}".
std::string graph_to_dot(const TaskGraph& graph);

/// Plain-text rendering: one "task ..." line per node and one
/// "dep <from> -> <to> : <interface>" line per edge, sorted.
std::string graph_to_text(const TaskGraph& graph);

}  // namespace depl
