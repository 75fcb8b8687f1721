#include "support/api_fuzzer.hpp"

#include <iterator>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace depl::testing {

namespace {

using Rng = std::mt19937_64;

int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Value value_of_kind(Rng& rng, ValueKind kind) {
  switch (kind) {
    case ValueKind::String: return Value("f" + std::to_string(pick(rng, 0, 999)));
    case ValueKind::Integer: return Value(static_cast<std::int64_t>(pick(rng, -500, 500)));
    case ValueKind::Boolean: return Value(pick(rng, 0, 1) == 1);
  }
  return Value("?");
}

template <typename T>
const T& choose(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(
      pick(rng, 0, static_cast<int>(items.size()) - 1))];
}

struct BindingMeta {
  std::uint64_t instance = 0;
  std::string port;
  std::string interface;
};

}  // namespace

FuzzOutcome run_api_fuzz(Runtime& runtime,
                         const std::vector<ComponentType>& registry,
                         std::uint64_t seed, int operations) {
  Rng rng(seed);
  FuzzOutcome out;
  auto fail = [&](std::string problem) { out.problem = std::move(problem); };

  std::map<std::string, const ComponentType*> types;
  for (const ComponentType& type : registry) types.emplace(type.name, &type);
  const std::vector<std::string> sites = {"local", "siteA"};
  const bool hierarchy = runtime.capabilities().supports_hierarchy;

  // The expected observable state, maintained by the same rules the API
  // documents, plus the handle tables needed to drive it.
  RuntimeSnapshot shadow;
  std::map<std::pair<std::string, std::string>, std::uint64_t> factory_by_key;
  std::vector<std::uint64_t> factory_handles;
  std::map<std::pair<std::uint64_t, std::string>, std::uint64_t> binding_by_key;
  std::map<std::uint64_t, BindingMeta> binding_meta;
  std::map<std::uint64_t, std::uint64_t> parent_of;

  auto type_of = [&](std::uint64_t handle) -> const ComponentType& {
    return *types.at(shadow.instances.at(handle).type);
  };

  auto verify = [&]() {
    if (!(runtime.snapshot() == shadow)) {
      fail("snapshot diverged from the expected state after " +
           std::to_string(out.operations) + " operations");
      return false;
    }
    return true;
  };

  enum class Op { Install, Instantiate, SetAttr, GetBinding, Bind, AddSub, Start };

  int guard = 0;
  while (out.operations < operations && out.problem.empty()) {
    if (++guard > operations * 4) {
      fail("no applicable operation found");
      break;
    }

    // --- what is currently possible ---------------------------------------
    std::vector<std::uint64_t> settable;       // unstarted, has declared attrs
    std::vector<std::uint64_t> gettable;       // type has a provided port
    std::vector<std::uint64_t> startable;      // unstarted, all required bound
    std::vector<std::uint64_t> unstarted;
    struct BindSlot {
      std::uint64_t instance;
      std::string port;
      std::string interface;
    };
    std::vector<BindSlot> bind_slots;          // unbound required ports
    for (const auto& [handle, state] : shadow.instances) {
      const ComponentType& type = type_of(handle);
      if (!state.started) {
        unstarted.push_back(handle);
        if (!type.attributes.empty()) settable.push_back(handle);
      }
      bool all_bound = true;
      for (const PortDecl& port : type.ports) {
        if (port.direction == PortDirection::Provided) {
          gettable.push_back(handle);
          continue;
        }
        if (state.links.count(port.name) == 0) {
          all_bound = false;
          if (!state.started) {
            bind_slots.push_back({handle, port.name, port.interface});
          }
        }
      }
      if (!state.started && all_bound) startable.push_back(handle);
    }
    std::vector<BindSlot> bindable;
    for (const BindSlot& slot : bind_slots) {
      for (const auto& [ref, meta] : binding_meta) {
        (void)ref;
        if (meta.interface == slot.interface) {
          bindable.push_back(slot);
          break;
        }
      }
    }

    std::vector<Op> candidates = {Op::Install};
    if (!factory_handles.empty() && shadow.instances.size() < 60) {
      candidates.insert(candidates.end(), 3, Op::Instantiate);
    }
    if (!settable.empty()) candidates.insert(candidates.end(), 3, Op::SetAttr);
    if (!gettable.empty()) candidates.insert(candidates.end(), 2, Op::GetBinding);
    if (!bindable.empty()) candidates.insert(candidates.end(), 3, Op::Bind);
    if (hierarchy && unstarted.size() >= 2) {
      candidates.insert(candidates.end(), 2, Op::AddSub);
    }
    if (!startable.empty()) candidates.push_back(Op::Start);

    // --- perform one valid call and mirror it ------------------------------
    switch (choose(rng, candidates)) {
      case Op::Install: {
        const std::string& type = choose(rng, registry).name;
        const std::string& site = choose(rng, sites);
        auto ref = runtime.install(type, site);
        if (!ref.ok()) {
          fail("install(" + type + ", " + site + ") failed: " +
               ref.error().code);
          break;
        }
        auto key = std::make_pair(type, site);
        auto known = factory_by_key.find(key);
        if (known != factory_by_key.end()) {
          if (known->second != ref.value().raw) {
            fail("install returned a new handle for a known (type, site)");
          }
        } else {
          factory_by_key.emplace(key, ref.value().raw);
          factory_handles.push_back(ref.value().raw);
          shadow.factories.insert(key);
        }
        break;
      }
      case Op::Instantiate: {
        std::uint64_t factory = choose(rng, factory_handles);
        auto ref = runtime.instantiate(FactoryRef{factory});
        if (!ref.ok()) {
          fail("instantiate failed: " + ref.error().code);
          break;
        }
        if (shadow.instances.count(ref.value().raw) != 0) {
          fail("instantiate returned a handle that is already in use");
          break;
        }
        SnapshotInstance state;
        for (const auto& [key, handle] : factory_by_key) {
          if (handle == factory) {
            state.type = key.first;
            state.site = key.second;
          }
        }
        shadow.instances.emplace(ref.value().raw, std::move(state));
        break;
      }
      case Op::SetAttr: {
        std::uint64_t handle = choose(rng, settable);
        const auto& attrs = type_of(handle).attributes;
        auto it = attrs.begin();
        std::advance(it, pick(rng, 0, static_cast<int>(attrs.size()) - 1));
        Value value = value_of_kind(rng, it->second);
        Status status =
            runtime.set_attribute(InstanceRef{handle}, it->first, value);
        if (!status.ok()) {
          fail("set_attribute failed: " + status.error().code);
          break;
        }
        shadow.instances.at(handle).attributes[it->first] = std::move(value);
        break;
      }
      case Op::GetBinding: {
        std::uint64_t handle = choose(rng, gettable);
        std::vector<const PortDecl*> provided;
        for (const PortDecl& port : type_of(handle).ports) {
          if (port.direction == PortDirection::Provided) {
            provided.push_back(&port);
          }
        }
        const PortDecl* port = choose(rng, provided);
        auto ref = runtime.get_binding(InstanceRef{handle}, port->name);
        if (!ref.ok()) {
          fail("get_binding failed: " + ref.error().code);
          break;
        }
        auto key = std::make_pair(handle, port->name);
        auto known = binding_by_key.find(key);
        if (known != binding_by_key.end()) {
          if (known->second != ref.value().raw) {
            fail("get_binding returned a new handle for a known port");
          }
        } else {
          binding_by_key.emplace(key, ref.value().raw);
          binding_meta.emplace(ref.value().raw,
                               BindingMeta{handle, port->name,
                                           port->interface});
        }
        break;
      }
      case Op::Bind: {
        const BindSlot& slot = choose(rng, bindable);
        std::vector<std::uint64_t> matching;
        for (const auto& [ref, meta] : binding_meta) {
          if (meta.interface == slot.interface) matching.push_back(ref);
        }
        std::uint64_t target = choose(rng, matching);
        Status status =
            runtime.bind(InstanceRef{slot.instance}, slot.port,
                         BindingRef{target});
        if (!status.ok()) {
          fail("bind failed: " + status.error().code);
          break;
        }
        const BindingMeta& meta = binding_meta.at(target);
        shadow.instances.at(slot.instance)
            .links.emplace(slot.port, std::make_pair(meta.instance, meta.port));
        break;
      }
      case Op::AddSub: {
        bool performed = false;
        for (int attempt = 0; attempt < 20 && !performed; ++attempt) {
          std::uint64_t parent = choose(rng, unstarted);
          std::uint64_t child = choose(rng, unstarted);
          if (parent == child) continue;
          // Mirror the runtime's own loop check: refuse when the child is
          // an ancestor of the parent.
          bool loops = false;
          for (std::uint64_t cursor = parent;;) {
            if (cursor == child) {
              loops = true;
              break;
            }
            auto up = parent_of.find(cursor);
            if (up == parent_of.end()) break;
            cursor = up->second;
          }
          if (loops) continue;
          const std::string name = "k" + std::to_string(out.operations % 7);
          Status status = runtime.add_sub_component(
              InstanceRef{parent}, InstanceRef{child}, name);
          if (!status.ok()) {
            fail("add_sub_component failed: " + status.error().code);
            break;
          }
          shadow.containment.emplace(parent, child, name);
          parent_of[child] = parent;
          performed = true;
        }
        if (!performed) continue;  // state offers no loop-free pair right now
        break;
      }
      case Op::Start: {
        std::uint64_t handle = choose(rng, startable);
        Status status = runtime.start(InstanceRef{handle});
        if (!status.ok()) {
          fail("start failed: " + status.error().code);
          break;
        }
        shadow.instances.at(handle).started = true;
        break;
      }
    }
    if (!out.problem.empty()) break;

    ++out.operations;
    if (out.operations % 512 == 0 && !verify()) break;
  }

  if (out.problem.empty()) verify();
  return out;
}

}  // namespace depl::testing
