#include "depl/backends.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>

namespace depl {

namespace {

std::uint64_t next_handle() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

class SimulatedRuntime final : public Runtime {
 public:
  SimulatedRuntime(BackendCapabilities caps, std::vector<ComponentType> types)
      : caps_(std::move(caps)) {
    for (ComponentType& type : types) {
      std::string name = type.name;
      registry_.emplace(std::move(name), std::move(type));
    }
  }

  Result<FactoryRef> install(const std::string& type,
                             const std::string& site) override {
    std::lock_guard<std::mutex> lock(mu_);
    if (registry_.count(type) == 0) {
      return Error{backend_error::kUnknownType,
                   "no component type named " + type};
    }
    auto key = std::make_pair(type, site);
    if (auto it = factories_.find(key); it != factories_.end()) {
      return FactoryRef{it->second};
    }
    FactoryRef ref{next_handle()};
    factories_.emplace(key, ref.raw);
    factory_meta_.emplace(ref.raw, key);
    return ref;
  }

  Result<InstanceRef> instantiate(FactoryRef factory) override {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = factory_meta_.find(factory.raw);
    if (it == factory_meta_.end()) {
      return Error{backend_error::kStaleHandle, "unknown factory handle"};
    }
    InstanceRef ref{next_handle()};
    SnapshotInstance state;
    state.type = it->second.first;
    state.site = it->second.second;
    instances_.emplace(ref.raw, std::move(state));
    return ref;
  }

  Status set_attribute(InstanceRef instance, const std::string& name,
                       const Value& value) override {
    std::lock_guard<std::mutex> lock(mu_);
    SnapshotInstance* state = find_instance(instance);
    if (state == nullptr) {
      return Error{backend_error::kStaleHandle, "unknown instance handle"};
    }
    if (state->started) {
      return Error{backend_error::kAlreadyStarted,
                   "instance is already started"};
    }
    const ComponentType& type = registry_.at(state->type);
    auto decl = type.attributes.find(name);
    if (decl == type.attributes.end()) {
      return Error{backend_error::kUnknownAttribute,
                   "type " + type.name + " declares no attribute " + name};
    }
    if (value.kind() != decl->second) {
      return Error{backend_error::kTypeMismatch,
                   "attribute " + name + " expects " +
                       std::string(to_string(decl->second)) + " but got " +
                       std::string(to_string(value.kind()))};
    }
    state->attributes[name] = value;
    return {};
  }

  Result<BindingRef> get_binding(InstanceRef instance,
                                 const std::string& provided_port) override {
    std::lock_guard<std::mutex> lock(mu_);
    SnapshotInstance* state = find_instance(instance);
    if (state == nullptr) {
      return Error{backend_error::kStaleHandle, "unknown instance handle"};
    }
    const ComponentType& type = registry_.at(state->type);
    const PortDecl* port = type.find_port(provided_port);
    if (port == nullptr || port->direction != PortDirection::Provided) {
      return Error{backend_error::kUnknownPort,
                   "type " + type.name + " has no provided port " +
                       provided_port};
    }
    auto key = std::make_pair(instance.raw, provided_port);
    if (auto it = binding_refs_.find(key); it != binding_refs_.end()) {
      return BindingRef{it->second};
    }
    BindingRef ref{next_handle()};
    binding_refs_.emplace(key, ref.raw);
    binding_meta_.emplace(ref.raw,
                          BindingTarget{instance.raw, provided_port,
                                        port->interface});
    return ref;
  }

  Status bind(InstanceRef instance, const std::string& required_port,
              BindingRef target) override {
    std::lock_guard<std::mutex> lock(mu_);
    SnapshotInstance* state = find_instance(instance);
    if (state == nullptr) {
      return Error{backend_error::kStaleHandle, "unknown instance handle"};
    }
    if (state->started) {
      return Error{backend_error::kAlreadyStarted,
                   "instance is already started"};
    }
    const ComponentType& type = registry_.at(state->type);
    const PortDecl* port = type.find_port(required_port);
    if (port == nullptr || port->direction != PortDirection::Required) {
      return Error{backend_error::kUnknownPort,
                   "type " + type.name + " has no required port " +
                       required_port};
    }
    if (state->links.count(required_port) != 0) {
      return Error{backend_error::kAlreadyBound,
                   "port " + required_port + " is already bound"};
    }
    auto meta = binding_meta_.find(target.raw);
    if (meta == binding_meta_.end()) {
      return Error{backend_error::kStaleHandle, "unknown binding handle"};
    }
    if (meta->second.interface != port->interface) {
      return Error{backend_error::kInterfaceMismatch,
                   "cannot bind " + port->interface + " to " +
                       meta->second.interface};
    }
    state->links.emplace(required_port,
                         std::make_pair(meta->second.instance,
                                        meta->second.port));
    return {};
  }

  Status add_sub_component(InstanceRef parent, InstanceRef child,
                           const std::string& name) override {
    std::lock_guard<std::mutex> lock(mu_);
    if (!caps_.supports_hierarchy) {
      return Error{backend_error::kUnsupported,
                   "backend " + caps_.backend_name +
                       " does not support sub-components"};
    }
    SnapshotInstance* parent_state = find_instance(parent);
    SnapshotInstance* child_state = find_instance(child);
    if (parent_state == nullptr || child_state == nullptr) {
      return Error{backend_error::kStaleHandle, "unknown instance handle"};
    }
    if (parent_state->started || child_state->started) {
      return Error{backend_error::kAlreadyStarted,
                   "containment members must not be started"};
    }
    // The new edge closes a loop iff the child is the parent or one of its
    // ancestors.
    for (std::uint64_t cursor = parent.raw;;) {
      if (cursor == child.raw) {
        return Error{backend_error::kCycle,
                     "adding this sub-component would form a containment "
                     "cycle"};
      }
      auto up = parent_of_.find(cursor);
      if (up == parent_of_.end()) break;
      cursor = up->second;
    }
    containment_.emplace(parent.raw, child.raw, name);
    parent_of_[child.raw] = parent.raw;
    return {};
  }

  Status start(InstanceRef instance) override {
    std::lock_guard<std::mutex> lock(mu_);
    SnapshotInstance* state = find_instance(instance);
    if (state == nullptr) {
      return Error{backend_error::kStaleHandle, "unknown instance handle"};
    }
    if (state->started) {
      return Error{backend_error::kAlreadyStarted,
                   "instance is already started"};
    }
    const ComponentType& type = registry_.at(state->type);
    for (const PortDecl& port : type.ports) {
      if (port.direction == PortDirection::Required &&
          state->links.count(port.name) == 0) {
        return Error{backend_error::kUnboundPort,
                     "required port " + port.name + " is not bound"};
      }
    }
    state->started = true;
    return {};
  }

  RuntimeSnapshot snapshot() const override {
    std::lock_guard<std::mutex> lock(mu_);
    RuntimeSnapshot snap;
    snap.instances = instances_;
    snap.containment = containment_;
    for (const auto& [key, handle] : factories_) {
      (void)handle;
      snap.factories.insert(key);
    }
    return snap;
  }

  const BackendCapabilities& capabilities() const override { return caps_; }

 private:
  struct BindingTarget {
    std::uint64_t instance = 0;
    std::string port;
    std::string interface;
  };

  SnapshotInstance* find_instance(InstanceRef ref) {
    auto it = instances_.find(ref.raw);
    return it == instances_.end() ? nullptr : &it->second;
  }

  BackendCapabilities caps_;
  std::map<std::string, ComponentType> registry_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> factories_;
  std::map<std::uint64_t, std::pair<std::string, std::string>> factory_meta_;
  std::map<std::uint64_t, SnapshotInstance> instances_;
  std::map<std::pair<std::uint64_t, std::string>, std::uint64_t> binding_refs_;
  std::map<std::uint64_t, BindingTarget> binding_meta_;
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::string>> containment_;
  std::map<std::uint64_t, std::uint64_t> parent_of_;
};

}  // namespace

std::unique_ptr<Runtime> make_runtime(const std::string& backend_name,
                                      std::vector<ComponentType> registry) {
  if (backend_name == "flat") {
    return std::make_unique<SimulatedRuntime>(
        BackendCapabilities{"flat", false}, std::move(registry));
  }
  if (backend_name == "hier") {
    return std::make_unique<SimulatedRuntime>(BackendCapabilities{"hier", true},
                                              std::move(registry));
  }
  return nullptr;
}

std::string serialize_snapshot(const RuntimeSnapshot& snapshot,
                               const InstanceNames& names) {
  auto name_of = [&](std::uint64_t handle) {
    auto it = names.find(handle);
    return it != names.end() ? it->second : "#" + std::to_string(handle);
  };

  std::vector<std::string> lines;
  for (const auto& [type, site] : snapshot.factories) {
    lines.push_back("factory " + type + " " + site);
  }
  for (const auto& [handle, state] : snapshot.instances) {
    const std::string name = name_of(handle);
    lines.push_back("instance " + name + " type=" + state.type +
                    " site=" + state.site +
                    " started=" + (state.started ? "true" : "false"));
    for (const auto& [attr, value] : state.attributes) {
      lines.push_back("attr " + name + "." + attr + " = " + value.to_text());
    }
    for (const auto& [port, target] : state.links) {
      lines.push_back("link " + name + "." + port + " -> " +
                      name_of(target.first) + "." + target.second);
    }
  }
  for (const auto& [parent, child, child_name] : snapshot.containment) {
    lines.push_back("contain " + name_of(parent) + "/" + name_of(child) +
                    " as " + child_name);
  }
  std::sort(lines.begin(), lines.end());

  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace depl
