#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "depl/config_model.hpp"
#include "depl/planner.hpp"
#include "depl/result.hpp"

namespace depl {

// Opaque handles, valid only within the runtime that issued them. Handle
// values are process-unique and never recycled, so a stale or foreign
// handle is always detected.
struct FactoryRef {
  std::uint64_t raw = 0;
  bool operator==(const FactoryRef&) const = default;
};

struct InstanceRef {
  std::uint64_t raw = 0;
  bool operator==(const InstanceRef&) const = default;
  auto operator<=>(const InstanceRef&) const = default;
};

struct BindingRef {
  std::uint64_t raw = 0;
  bool operator==(const BindingRef&) const = default;
};

namespace backend_error {
inline constexpr const char* kUnknownType = "UNKNOWN_TYPE";
inline constexpr const char* kStaleHandle = "STALE_HANDLE";
inline constexpr const char* kUnknownAttribute = "UNKNOWN_ATTRIBUTE";
inline constexpr const char* kTypeMismatch = "TYPE_MISMATCH";
inline constexpr const char* kAlreadyStarted = "ALREADY_STARTED";
inline constexpr const char* kUnknownPort = "UNKNOWN_PORT";
inline constexpr const char* kAlreadyBound = "ALREADY_BOUND";
inline constexpr const char* kInterfaceMismatch = "INTERFACE_MISMATCH";
inline constexpr const char* kUnsupported = "UNSUPPORTED";
inline constexpr const char* kCycle = "CYCLE";
inline constexpr const char* kUnboundPort = "UNBOUND_PORT";
}  // namespace backend_error

/// Observable state of one deployed instance.
struct SnapshotInstance {
  std::string type;
  std::string site;
  std::map<std::string, Value> attributes;
  /// required port -> (server instance handle, provided port)
  std::map<std::string, std::pair<std::uint64_t, std::string>> links;
  bool started = false;

  bool operator==(const SnapshotInstance&) const = default;
};

/// Full observable state of a runtime at one point in time.
struct RuntimeSnapshot {
  std::map<std::uint64_t, SnapshotInstance> instances;
  /// (parent handle, child handle, child name)
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::string>> containment;
  std::set<std::pair<std::string, std::string>> factories;  ///< (type, site)

  bool operator==(const RuntimeSnapshot&) const = default;
};

/// The abstract deployment API a task graph drives. Implementations
/// synchronize internally: any operation may be called concurrently with
/// any other.
class Runtime {
 public:
  virtual ~Runtime() = default;

  /// Idempotent per (type, site): repeated calls return the same handle.
  virtual Result<FactoryRef> install(const std::string& type,
                                     const std::string& site) = 0;
  /// Creates a fresh, unstarted instance with no attributes or links.
  virtual Result<InstanceRef> instantiate(FactoryRef factory) = 0;
  /// Declared attribute, matching value kind, instance not started.
  virtual Status set_attribute(InstanceRef instance, const std::string& name,
                               const Value& value) = 0;
  /// Stable handle per (instance, provided port).
  virtual Result<BindingRef> get_binding(InstanceRef instance,
                                         const std::string& provided_port) = 0;
  /// Connects a yet-unbound required port; interfaces must match.
  virtual Status bind(InstanceRef instance, const std::string& required_port,
                      BindingRef target) = 0;
  /// Hierarchy only; rejects containment cycles and started members.
  virtual Status add_sub_component(InstanceRef parent, InstanceRef child,
                                   const std::string& name) = 0;
  /// Requires every required port bound; irreversible.
  virtual Status start(InstanceRef instance) = 0;

  virtual RuntimeSnapshot snapshot() const = 0;
  virtual const BackendCapabilities& capabilities() const = 0;
};

/// "flat" (no hierarchy) or "hier"; null for anything else. The registry
/// defines the component types the runtime can install and instantiate.
std::unique_ptr<Runtime> make_runtime(const std::string& backend_name,
                                      std::vector<ComponentType> registry);

/// Handle -> human name, used to keep serialized snapshots independent of
/// handle allocation order (and thus of execution schedule).
using InstanceNames = std::map<std::uint64_t, std::string>;

/// One line per fact, lexicographically sorted — byte-equal for equal
/// observable states under equal naming.
std::string serialize_snapshot(const RuntimeSnapshot& snapshot,
                               const InstanceNames& names);

}  // namespace depl
