#include "depl/config_model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace depl {

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::String: return "string";
    case ValueKind::Integer: return "integer";
    case ValueKind::Boolean: return "boolean";
  }
  return "?";
}

std::optional<ValueKind> value_kind_from(std::string_view text) {
  if (text == "string") return ValueKind::String;
  if (text == "integer") return ValueKind::Integer;
  if (text == "boolean") return ValueKind::Boolean;
  return std::nullopt;
}

std::string quoted(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c); break;
    }
  }
  out.push_back('"');
  return out;
}

std::string Value::to_text() const {
  switch (kind()) {
    case ValueKind::String: return quoted(as_string());
    case ValueKind::Integer: return std::to_string(as_integer());
    case ValueKind::Boolean: return as_boolean() ? "true" : "false";
  }
  return "?";
}

std::string_view to_string(PortDirection direction) {
  return direction == PortDirection::Provided ? "provides" : "requires";
}

const PortDecl* ComponentType::find_port(std::string_view port_name) const {
  for (const PortDecl& port : ports) {
    if (port.name == port_name) return &port;
  }
  return nullptr;
}

const ComponentType* Configuration::find_type(std::string_view name) const {
  for (const ComponentType& type : types) {
    if (type.name == name) return &type;
  }
  return nullptr;
}

const Instance* Configuration::find_instance(std::string_view id) const {
  for (const Instance& instance : instances) {
    if (instance.id == id) return &instance;
  }
  return nullptr;
}

bool Configuration::empty() const {
  return interfaces.empty() && types.empty() && instances.empty() &&
         bindings.empty() && containments.empty();
}

Configuration canonical(Configuration config) {
  std::sort(config.interfaces.begin(), config.interfaces.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(config.types.begin(), config.types.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  for (ComponentType& type : config.types) {
    std::sort(type.ports.begin(), type.ports.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
  }
  std::sort(config.instances.begin(), config.instances.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(config.bindings.begin(), config.bindings.end(),
            [](const Binding& a, const Binding& b) {
              return std::tie(a.client_instance, a.client_port,
                              a.server_instance, a.server_port) <
                     std::tie(b.client_instance, b.client_port,
                              b.server_instance, b.server_port);
            });
  std::sort(config.containments.begin(), config.containments.end(),
            [](const Containment& a, const Containment& b) {
              return std::tie(a.child, a.parent, a.child_name) <
                     std::tie(b.child, b.parent, b.child_name);
            });
  return config;
}

namespace {

void require_name(std::vector<Violation>& out, const std::string& name,
                  const std::string& what) {
  if (name.empty()) {
    out.push_back({violation::kEmptyName, what, what + " has an empty name"});
  }
}

/// Walks the containment child->parent relation and reports each distinct
/// cycle once, identified by its lexicographically smallest member.
void check_containment_cycles(const std::vector<Containment>& containments,
                              std::vector<Violation>& out) {
  std::map<std::string, std::vector<std::string>> children_of;
  std::set<std::string> nodes;
  for (const Containment& c : containments) {
    children_of[c.parent].push_back(c.child);
    nodes.insert(c.parent);
    nodes.insert(c.child);
  }

  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  for (const std::string& n : nodes) mark[n] = Mark::White;

  std::set<std::string> reported;  // smallest member of each reported cycle
  std::vector<std::string> stack;

  // Iterative DFS with an explicit stack of (node, next-child-index).
  for (const std::string& root : nodes) {
    if (mark[root] != Mark::White) continue;
    std::vector<std::pair<std::string, std::size_t>> frames;
    frames.push_back({root, 0});
    mark[root] = Mark::Grey;
    stack.push_back(root);
    while (!frames.empty()) {
      auto& [node, next] = frames.back();
      const auto it = children_of.find(node);
      const std::vector<std::string>* kids =
          it == children_of.end() ? nullptr : &it->second;
      if (kids != nullptr && next < kids->size()) {
        const std::string& child = (*kids)[next++];
        if (mark[child] == Mark::Grey) {
          // Found a cycle: everything on the stack from `child` onward.
          auto pos = std::find(stack.begin(), stack.end(), child);
          std::vector<std::string> members(pos, stack.end());
          std::sort(members.begin(), members.end());
          if (reported.insert(members.front()).second) {
            std::string detail = "containment cycle through";
            for (const std::string& m : members) detail += " " + m;
            out.push_back({violation::kContainmentCycle, members.front(), detail});
          }
        } else if (mark[child] == Mark::White) {
          mark[child] = Mark::Grey;
          stack.push_back(child);
          frames.push_back({child, 0});
        }
      } else {
        mark[node] = Mark::Black;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Configuration& config) {
  std::vector<Violation> out;

  // --- interfaces ---------------------------------------------------------
  std::set<std::string> interface_names;
  for (const InterfaceSignature& iface : config.interfaces) {
    require_name(out, iface.name, "interface");
    if (!iface.name.empty() && !interface_names.insert(iface.name).second) {
      out.push_back({violation::kDuplicateInterface, iface.name,
                     "interface " + iface.name + " is declared more than once"});
    }
  }

  // --- component types ----------------------------------------------------
  std::set<std::string> type_names;
  for (const ComponentType& type : config.types) {
    require_name(out, type.name, "type");
    if (!type.name.empty() && !type_names.insert(type.name).second) {
      out.push_back({violation::kDuplicateType, type.name,
                     "type " + type.name + " is declared more than once"});
    }
    std::set<std::string> port_names;
    for (const PortDecl& port : type.ports) {
      require_name(out, port.name, "port");
      if (!port.name.empty() && !port_names.insert(port.name).second) {
        out.push_back({violation::kDuplicatePort, type.name + "." + port.name,
                       "port " + port.name + " is declared more than once on " +
                           type.name});
      }
      if (interface_names.count(port.interface) == 0) {
        out.push_back({violation::kUnknownInterface,
                       type.name + "." + port.name,
                       "port " + port.name + " on " + type.name +
                           " references undeclared interface " + port.interface});
      }
    }
    for (const auto& [attr_name, kind] : type.attributes) {
      (void)kind;
      require_name(out, attr_name, "attribute");
    }
  }

  // --- instances ----------------------------------------------------------
  std::set<std::string> instance_ids;
  for (const Instance& instance : config.instances) {
    require_name(out, instance.id, "instance");
    require_name(out, instance.site, "site");
    if (!instance.id.empty() && !instance_ids.insert(instance.id).second) {
      out.push_back({violation::kDuplicateInstance, instance.id,
                     "instance " + instance.id + " is declared more than once"});
    }
    const ComponentType* type = config.find_type(instance.type);
    if (type == nullptr) {
      out.push_back({violation::kUnknownType, instance.id,
                     "instance " + instance.id + " has undeclared type " +
                         instance.type});
      continue;
    }
    for (const auto& [attr_name, value] : instance.attribute_values) {
      auto decl = type->attributes.find(attr_name);
      if (decl == type->attributes.end()) {
        out.push_back({violation::kUnknownAttribute,
                       instance.id + "." + attr_name,
                       "instance " + instance.id + " assigns attribute " +
                           attr_name + " not declared on type " + type->name});
        continue;
      }
      if (value.kind() != decl->second) {
        out.push_back(
            {violation::kValueKindMismatch, instance.id + "." + attr_name,
             "attribute " + attr_name + " on " + instance.id + " expects " +
                 std::string(to_string(decl->second)) + " but was assigned " +
                 std::string(to_string(value.kind()))});
      }
    }
  }

  // --- bindings -----------------------------------------------------------
  std::set<std::string> client_endpoints;
  for (const Binding& binding : config.bindings) {
    const std::string label = binding.client_endpoint() + " -> " +
                              binding.server_instance + "." +
                              binding.server_port;
    if (!client_endpoints.insert(binding.client_endpoint()).second) {
      out.push_back({violation::kAmbiguousBinding, binding.client_endpoint(),
                     "required port " + binding.client_endpoint() +
                         " is bound more than once"});
    }

    const PortDecl* client_port = nullptr;
    const PortDecl* server_port = nullptr;

    const Instance* client = config.find_instance(binding.client_instance);
    if (client == nullptr) {
      out.push_back({violation::kUnknownInstance, label,
                     "binding references unknown instance " +
                         binding.client_instance});
    } else if (const ComponentType* type = config.find_type(client->type)) {
      client_port = type->find_port(binding.client_port);
      if (client_port == nullptr) {
        out.push_back({violation::kUnknownPort, label,
                       "instance " + binding.client_instance + " of type " +
                           type->name + " has no port " + binding.client_port});
      } else if (client_port->direction != PortDirection::Required) {
        out.push_back({violation::kBindingDirection, label,
                       "client side " + binding.client_endpoint() +
                           " must name a required port"});
        client_port = nullptr;
      }
    }

    const Instance* server = config.find_instance(binding.server_instance);
    if (server == nullptr) {
      out.push_back({violation::kUnknownInstance, label,
                     "binding references unknown instance " +
                         binding.server_instance});
    } else if (const ComponentType* type = config.find_type(server->type)) {
      server_port = type->find_port(binding.server_port);
      if (server_port == nullptr) {
        out.push_back({violation::kUnknownPort, label,
                       "instance " + binding.server_instance + " of type " +
                           type->name + " has no port " + binding.server_port});
      } else if (server_port->direction != PortDirection::Provided) {
        out.push_back({violation::kBindingDirection, label,
                       "server side " + binding.server_instance + "." +
                           binding.server_port + " must name a provided port"});
        server_port = nullptr;
      }
    }

    if (client_port != nullptr && server_port != nullptr &&
        client_port->interface != server_port->interface) {
      out.push_back({violation::kInterfaceMismatch, label,
                     "cannot bind " + client_port->interface + " to " +
                         server_port->interface});
    }
  }

  // --- containments -------------------------------------------------------
  std::set<std::pair<std::string, std::string>> containment_pairs;
  std::map<std::string, std::string> parent_of;
  std::set<std::pair<std::string, std::string>> child_names;
  for (const Containment& c : config.containments) {
    const std::string label = c.parent + "/" + c.child;
    require_name(out, c.child_name, "child name");
    for (const std::string& id : {c.parent, c.child}) {
      if (config.find_instance(id) == nullptr) {
        out.push_back({violation::kUnknownInstance, label,
                       "containment references unknown instance " + id});
      }
    }
    if (c.parent == c.child) {
      out.push_back({violation::kSelfContainment, c.parent,
                     "instance " + c.parent + " cannot contain itself"});
    }
    if (!containment_pairs.insert({c.parent, c.child}).second) {
      out.push_back({violation::kDuplicateContainment, label,
                     "containment " + label + " is declared more than once"});
    } else {
      auto [it, fresh] = parent_of.insert({c.child, c.parent});
      if (!fresh && it->second != c.parent) {
        out.push_back({violation::kMultipleParents, c.child,
                       "instance " + c.child + " has more than one parent"});
      }
    }
    if (!c.child_name.empty() &&
        !child_names.insert({c.parent, c.child_name}).second) {
      out.push_back({violation::kDuplicateChildName,
                     c.parent + "/" + c.child_name,
                     "parent " + c.parent + " uses child name " + c.child_name +
                         " more than once"});
    }
  }
  check_containment_cycles(config.containments, out);

  return out;
}

}  // namespace depl
