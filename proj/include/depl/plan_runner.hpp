#pragma once

#include <mutex>
#include <optional>
#include <string>

#include "depl/backends.hpp"
#include "depl/engine.hpp"

namespace depl {

/// Executes task nodes against a runtime: each task kind maps onto one
/// deployment API call, with handles flowing along the dependency edges.
/// Also records which instance id each instance handle belongs to, so
/// snapshots can be serialized independently of handle allocation order.
///
/// Thread-compatible with the engine's worker pool: distinct tasks may run
/// concurrently.
class PlanRunner {
 public:
  explicit PlanRunner(Runtime& runtime) : runtime_(runtime) {}

  /// Makes the named task fail when reached — for exercising failure paths.
  void fail_task(std::string task_id) { fail_task_ = std::move(task_id); }

  Result<std::uint64_t> run(const TaskNode& node, const TaskInputs& inputs);

  /// Binds to the engine's executor signature.
  TaskExecutor executor() {
    return [this](const TaskNode& node, const TaskInputs& inputs) {
      return run(node, inputs);
    };
  }

  /// Handle -> instance id for every instance created so far.
  InstanceNames instance_names() const;

 private:
  Runtime& runtime_;
  std::optional<std::string> fail_task_;
  mutable std::mutex mu_;
  InstanceNames names_;
};

}  // namespace depl
