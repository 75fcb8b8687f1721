#include "depl/planner.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

namespace depl {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Installation: return "Installation";
    case TaskKind::Instantiation: return "Instantiation";
    case TaskKind::AttributeSetter: return "AttributeSetter";
    case TaskKind::BindingGetter: return "BindingGetter";
    case TaskKind::BindingSetter: return "BindingSetter";
    case TaskKind::AddComponent: return "AddComponent";
    case TaskKind::Initialization: return "Initialization";
  }
  return "?";
}

std::string_view to_string(InterfaceKind kind) {
  switch (kind) {
    case InterfaceKind::FactoryProvider: return "FactoryProvider";
    case InterfaceKind::InstanceProvider: return "InstanceProvider";
    case InterfaceKind::BindingProvider: return "BindingProvider";
    case InterfaceKind::InstanceConfiguration: return "InstanceConfiguration";
  }
  return "?";
}

std::string_view to_string(EdgeRole role) {
  switch (role) {
    case EdgeRole::None: return "none";
    case EdgeRole::Parent: return "parent";
    case EdgeRole::Child: return "child";
  }
  return "?";
}

std::string target_label(const TaskTarget& target) {
  if (const auto* type_site = std::get_if<TypeSite>(&target)) {
    return type_site->label();
  }
  return std::get<std::string>(target);
}

const TaskNode* TaskGraph::find(std::string_view id) const {
  for (const TaskNode& node : nodes) {
    if (node.id == id) return &node;
  }
  return nullptr;
}

namespace {

std::string installation_id(const std::string& type, const std::string& site) {
  return "Installation/" + type + "@" + site;
}

std::string instantiation_id(const std::string& instance) {
  return "Instantiation/" + instance;
}

std::string initialization_id(const std::string& instance) {
  return "Initialization/" + instance;
}

std::string getter_id(const Binding& b) {
  return "BindingGetter/" + b.server_instance + "/" + b.server_port + "/" +
         b.client_instance + "." + b.client_port;
}

std::string setter_id(const Binding& b) {
  return "BindingSetter/" + b.client_instance + "/" + b.client_port;
}

std::string add_component_id(const Containment& c) {
  return "AddComponent/" + c.parent + "/" + c.child_name;
}

}  // namespace

Result<TaskGraph> compile(const Configuration& config,
                          const BackendCapabilities& caps) {
  if (!validate(config).empty()) {
    return Error{compile_error::kInvalidConfig,
                 "configuration has validation violations"};
  }
  if (!config.containments.empty() && !caps.supports_hierarchy) {
    return Error{compile_error::kHierarchyUnsupported,
                 "configuration uses containment but backend " +
                     caps.backend_name + " is flat"};
  }

  TaskGraph graph;
  auto node = [&](std::string id, TaskKind kind, TaskTarget target,
                  std::optional<std::string> name = std::nullopt,
                  std::optional<Value> value = std::nullopt) {
    graph.nodes.push_back({std::move(id), kind, std::move(target),
                           std::move(name), std::move(value)});
  };
  auto edge = [&](std::string from, std::string to, InterfaceKind kind,
                  EdgeRole role = EdgeRole::None) {
    graph.edges.push_back({std::move(from), std::move(to), kind, role});
  };

  // One Installation per distinct (type, site) pair actually used.
  std::set<std::pair<std::string, std::string>> type_sites;
  for (const Instance& instance : config.instances) {
    type_sites.insert({instance.type, instance.site});
  }
  for (const auto& [type, site] : type_sites) {
    node(installation_id(type, site), TaskKind::Installation,
         TypeSite{type, site});
  }

  // One Instantiation per instance, fed by its factory.
  for (const Instance& instance : config.instances) {
    node(instantiation_id(instance.id), TaskKind::Instantiation, instance.id);
    edge(installation_id(instance.type, instance.site),
         instantiation_id(instance.id), InterfaceKind::FactoryProvider);
  }

  // One AttributeSetter per assigned attribute.
  for (const Instance& instance : config.instances) {
    for (const auto& [name, value] : instance.attribute_values) {
      std::string id = "AttributeSetter/" + instance.id + "/" + name;
      node(id, TaskKind::AttributeSetter, instance.id, name, value);
      edge(instantiation_id(instance.id), id, InterfaceKind::InstanceProvider);
    }
  }

  // Per binding: a getter on the server side, a setter on the client side.
  for (const Binding& binding : config.bindings) {
    node(getter_id(binding), TaskKind::BindingGetter, binding.server_instance,
         binding.server_port);
    edge(instantiation_id(binding.server_instance), getter_id(binding),
         InterfaceKind::InstanceProvider);
    node(setter_id(binding), TaskKind::BindingSetter, binding.client_instance,
         binding.client_port);
    edge(instantiation_id(binding.client_instance), setter_id(binding),
         InterfaceKind::InstanceProvider);
    edge(getter_id(binding), setter_id(binding),
         InterfaceKind::BindingProvider);
  }

  // One AddComponent per containment, needing both member instances.
  for (const Containment& containment : config.containments) {
    node(add_component_id(containment), TaskKind::AddComponent,
         containment.parent, containment.child_name);
    edge(instantiation_id(containment.parent), add_component_id(containment),
         InterfaceKind::InstanceProvider, EdgeRole::Parent);
    edge(instantiation_id(containment.child), add_component_id(containment),
         InterfaceKind::InstanceProvider, EdgeRole::Child);
  }

  // One Initialization per instance, after every configuration step that
  // touches it: its attribute setters, its side of every binding, and any
  // containment it participates in (either side).
  for (const Instance& instance : config.instances) {
    node(initialization_id(instance.id), TaskKind::Initialization,
         instance.id);
    edge(instantiation_id(instance.id), initialization_id(instance.id),
         InterfaceKind::InstanceProvider);
    for (const auto& [name, value] : instance.attribute_values) {
      (void)value;
      edge("AttributeSetter/" + instance.id + "/" + name,
           initialization_id(instance.id),
           InterfaceKind::InstanceConfiguration);
    }
  }
  for (const Binding& binding : config.bindings) {
    edge(getter_id(binding), initialization_id(binding.server_instance),
         InterfaceKind::InstanceConfiguration);
    edge(setter_id(binding), initialization_id(binding.client_instance),
         InterfaceKind::InstanceConfiguration);
  }
  for (const Containment& containment : config.containments) {
    edge(add_component_id(containment),
         initialization_id(containment.parent),
         InterfaceKind::InstanceConfiguration);
    edge(add_component_id(containment), initialization_id(containment.child),
         InterfaceKind::InstanceConfiguration);
  }

  std::sort(graph.nodes.begin(), graph.nodes.end(),
            [](const TaskNode& a, const TaskNode& b) { return a.id < b.id; });
  std::sort(graph.edges.begin(), graph.edges.end(),
            [](const DependencyEdge& a, const DependencyEdge& b) {
              return std::tie(a.from, a.to, a.interface_kind, a.role) <
                     std::tie(b.from, b.to, b.interface_kind, b.role);
            });
  return graph;
}

namespace {

std::string node_label(const TaskNode& node) {
  std::string label =
      std::string(to_string(node.kind)) + ":" + target_label(node.target);
  if (node.name_param) label += ":" + *node.name_param;
  return label;
}

}  // namespace

std::string graph_to_dot(const TaskGraph& graph) {
  if (graph.nodes.empty() && graph.edges.empty()) return "digraph plan {}\n";
  std::string out = "digraph plan {\n";
  for (const TaskNode& node : graph.nodes) {
    out += "  \"" + node.id + "\" [label=\"" + node_label(node) + "\"];\n";
  }
  for (const DependencyEdge& edge : graph.edges) {
    out += "  \"" + edge.from + "\" -> \"" + edge.to + "\" [label=\"" +
           std::string(to_string(edge.interface_kind)) + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string graph_to_text(const TaskGraph& graph) {
  std::string out;
  for (const TaskNode& node : graph.nodes) {
    out += "task " + node.id + " kind=" + std::string(to_string(node.kind)) +
           " target=" + target_label(node.target);
    if (node.name_param) out += " name=" + *node.name_param;
    if (node.value_param) out += " value=" + node.value_param->to_text();
    out += "\n";
  }
  for (const DependencyEdge& edge : graph.edges) {
    out += "dep " + edge.from + " -> " + edge.to + " : " +
           std::string(to_string(edge.interface_kind));
    if (edge.role != EdgeRole::None) {
      out += " role=" + std::string(to_string(edge.role));
    }
    out += "\n";
  }
  return out;
}

}  // namespace depl
