#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "depl/planner.hpp"
#include "depl/result.hpp"

namespace depl {

/// Predecessor and successor sets per task, the scheduler's working data.
struct DependencyLists {
  std::map<std::string, std::set<std::string>> tp;  ///< task -> predecessors
  std::map<std::string, std::set<std::string>> ts;  ///< task -> successors

  bool operator==(const DependencyLists&) const = default;
};

/// Both maps carry exactly the graph's node set as keys, and
/// x in tp[y] iff y in ts[x].
DependencyLists build_dependency_lists(const TaskGraph& graph);

struct EngineConfig {
  int workers = 1;
  /// When a task fails, start nothing new and let running tasks drain.
  bool fail_fast = true;
  /// Ready tasks are normally claimed in ascending task-id order. When set,
  /// they are ranked by a seeded stable hash instead — a hook for exploring
  /// alternative schedules without touching dependency semantics.
  std::optional<std::uint64_t> tie_break_seed;
};

enum class TracePhase { Start, End };

struct TraceEvent {
  int seq = 0;
  TracePhase phase = TracePhase::Start;
  std::string task;
  int worker = 0;

  bool operator==(const TraceEvent&) const = default;
};

enum class Outcome { Completed, CycleDetected, TaskFailed };

struct ExecutionTrace {
  std::vector<TraceEvent> events;
  Outcome outcome = Outcome::Completed;
  /// CycleDetected only: every task that never became ready, sorted.
  std::vector<std::string> remaining;
  /// TaskFailed only.
  std::string failed_task;
  std::string failure_reason;
};

/// One entry per dependency edge into a task, carrying the provider's
/// output value.
struct TaskInput {
  std::string provider;
  InterfaceKind interface_kind = InterfaceKind::FactoryProvider;
  EdgeRole role = EdgeRole::None;
  std::uint64_t output = 0;
};

struct TaskInputs {
  std::vector<TaskInput> entries;  ///< sorted by (provider, interface, role)

  std::optional<std::uint64_t> first(InterfaceKind kind) const;
  std::optional<std::uint64_t> by_role(EdgeRole role) const;
};

/// Runs one task given its inputs; the returned value is handed to every
/// dependant task. Must tolerate concurrent calls on distinct tasks.
using TaskExecutor =
    std::function<Result<std::uint64_t>(const TaskNode&, const TaskInputs&)>;

/// Executes the graph: a task starts only after all its predecessors ended
/// successfully; at most `workers` tasks run at once; ready tasks are
/// claimed in tie-break order, so workers=1 yields one fixed, reproducible
/// schedule. Ends with Completed when everything ran, CycleDetected (with
/// the exact unexecuted set) when the ready set drains while tasks remain,
/// or TaskFailed on the first executor failure.
ExecutionTrace execute(const TaskGraph& graph, const TaskExecutor& executor,
                       const EngineConfig& config);

/// Newline-delimited "EVT <seq> <START|END> <task> worker=<k>" records
/// followed by one OUTCOME line; byte-stable for workers=1.
std::string serialize_trace(const ExecutionTrace& trace);

}  // namespace depl
