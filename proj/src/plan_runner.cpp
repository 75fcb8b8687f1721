#include "depl/plan_runner.hpp"

namespace depl {

namespace {

Result<std::uint64_t> from_status(Status status) {
  if (!status.ok()) return status.error();
  return std::uint64_t{0};
}

Error missing_input(const TaskNode& node, std::string_view what) {
  return Error{"MISSING_INPUT", "task " + node.id + " received no " +
                                    std::string(what) + " input"};
}

}  // namespace

Result<std::uint64_t> PlanRunner::run(const TaskNode& node,
                                      const TaskInputs& inputs) {
  if (fail_task_ && node.id == *fail_task_) {
    return Error{"INJECTED_FAILURE", "task " + node.id + " failed on request"};
  }

  switch (node.kind) {
    case TaskKind::Installation: {
      const TypeSite& target = std::get<TypeSite>(node.target);
      auto factory = runtime_.install(target.type, target.site);
      if (!factory.ok()) return factory.error();
      return factory.value().raw;
    }

    case TaskKind::Instantiation: {
      auto factory = inputs.first(InterfaceKind::FactoryProvider);
      if (!factory) return missing_input(node, "factory");
      auto instance = runtime_.instantiate(FactoryRef{*factory});
      if (!instance.ok()) return instance.error();
      {
        std::lock_guard<std::mutex> lock(mu_);
        names_[instance.value().raw] = std::get<std::string>(node.target);
      }
      return instance.value().raw;
    }

    case TaskKind::AttributeSetter: {
      auto instance = inputs.first(InterfaceKind::InstanceProvider);
      if (!instance) return missing_input(node, "instance");
      return from_status(runtime_.set_attribute(
          InstanceRef{*instance}, node.name_param.value(),
          node.value_param.value()));
    }

    case TaskKind::BindingGetter: {
      auto instance = inputs.first(InterfaceKind::InstanceProvider);
      if (!instance) return missing_input(node, "instance");
      auto binding =
          runtime_.get_binding(InstanceRef{*instance}, node.name_param.value());
      if (!binding.ok()) return binding.error();
      return binding.value().raw;
    }

    case TaskKind::BindingSetter: {
      auto instance = inputs.first(InterfaceKind::InstanceProvider);
      auto binding = inputs.first(InterfaceKind::BindingProvider);
      if (!instance) return missing_input(node, "instance");
      if (!binding) return missing_input(node, "binding");
      return from_status(runtime_.bind(InstanceRef{*instance},
                                       node.name_param.value(),
                                       BindingRef{*binding}));
    }

    case TaskKind::AddComponent: {
      auto parent = inputs.by_role(EdgeRole::Parent);
      auto child = inputs.by_role(EdgeRole::Child);
      if (!parent) return missing_input(node, "parent instance");
      if (!child) return missing_input(node, "child instance");
      return from_status(runtime_.add_sub_component(InstanceRef{*parent},
                                                    InstanceRef{*child},
                                                    node.name_param.value()));
    }

    case TaskKind::Initialization: {
      auto instance = inputs.first(InterfaceKind::InstanceProvider);
      if (!instance) return missing_input(node, "instance");
      return from_status(runtime_.start(InstanceRef{*instance}));
    }
  }
  return Error{"UNREACHABLE", "unhandled task kind"};
}

InstanceNames PlanRunner::instance_names() const {
  std::lock_guard<std::mutex> lock(mu_);
  return names_;
}

}  // namespace depl
