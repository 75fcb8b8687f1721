#include "depl/engine.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <tuple>

namespace depl {

DependencyLists build_dependency_lists(const TaskGraph& graph) {
  DependencyLists lists;
  for (const TaskNode& node : graph.nodes) {
    lists.tp[node.id];
    lists.ts[node.id];
  }
  for (const DependencyEdge& edge : graph.edges) {
    lists.tp[edge.to].insert(edge.from);
    lists.ts[edge.from].insert(edge.to);
  }
  return lists;
}

std::optional<std::uint64_t> TaskInputs::first(InterfaceKind kind) const {
  for (const TaskInput& entry : entries) {
    if (entry.interface_kind == kind) return entry.output;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> TaskInputs::by_role(EdgeRole role) const {
  for (const TaskInput& entry : entries) {
    if (entry.role == role) return entry.output;
  }
  return std::nullopt;
}

namespace {

// Stable across platforms and runs (unlike std::hash): FNV-1a over the id,
// mixed with the seed.
std::uint64_t tie_break_rank(const std::string& id,
                             const std::optional<std::uint64_t>& seed) {
  if (!seed) return 0;
  std::uint64_t h = 14695981039346656037ULL ^ (*seed * 1099511628211ULL);
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

ExecutionTrace execute(const TaskGraph& graph, const TaskExecutor& executor,
                       const EngineConfig& config) {
  ExecutionTrace trace;
  const DependencyLists lists = build_dependency_lists(graph);

  std::map<std::string, const TaskNode*> nodes;
  for (const TaskNode& node : graph.nodes) nodes.emplace(node.id, &node);

  // Incoming edges per task, in deterministic order, for input assembly.
  std::map<std::string, std::vector<const DependencyEdge*>> in_edges;
  for (const DependencyEdge& edge : graph.edges) {
    in_edges[edge.to].push_back(&edge);
  }
  for (auto& [id, edges] : in_edges) {
    (void)id;
    std::sort(edges.begin(), edges.end(),
              [](const DependencyEdge* a, const DependencyEdge* b) {
                return std::tie(a->from, a->interface_kind, a->role) <
                       std::tie(b->from, b->interface_kind, b->role);
              });
  }

  std::mutex mu;
  std::condition_variable cv;
  // Ready tasks keyed by (tie-break rank, id); begin() is the next claim.
  std::set<std::pair<std::uint64_t, std::string>> ready;
  std::map<std::string, std::set<std::string>> pending = lists.tp;
  std::map<std::string, std::uint64_t> outputs;
  std::set<std::string> done;
  int running = 0;
  int seq = 0;
  bool halt = false;
  std::optional<std::pair<std::string, std::string>> failure;

  auto push_ready = [&](const std::string& id) {
    ready.insert({tie_break_rank(id, config.tie_break_seed), id});
  };
  for (const auto& [id, preds] : pending) {
    if (preds.empty()) push_ready(id);
  }

  auto worker_fn = [&](int worker_index) {
    std::unique_lock<std::mutex> lock(mu);
    while (true) {
      cv.wait(lock, [&] {
        return (!halt && !ready.empty()) ||
               (running == 0 && (ready.empty() || halt));
      });
      if (halt || ready.empty()) return;

      const std::string id = ready.begin()->second;
      ready.erase(ready.begin());
      ++running;
      trace.events.push_back({seq++, TracePhase::Start, id, worker_index});

      TaskInputs inputs;
      if (auto it = in_edges.find(id); it != in_edges.end()) {
        for (const DependencyEdge* edge : it->second) {
          inputs.entries.push_back({edge->from, edge->interface_kind,
                                    edge->role, outputs.at(edge->from)});
        }
      }
      const TaskNode* node = nodes.at(id);

      lock.unlock();
      Result<std::uint64_t> result = executor(*node, inputs);
      lock.lock();

      trace.events.push_back({seq++, TracePhase::End, id, worker_index});
      --running;
      if (result.ok()) {
        outputs[id] = result.value();
        done.insert(id);
        for (const std::string& successor : lists.ts.at(id)) {
          auto& preds = pending.at(successor);
          preds.erase(id);
          if (preds.empty()) push_ready(successor);
        }
      } else {
        if (!failure) failure = {id, result.error().message};
        if (config.fail_fast) halt = true;
        // Without fail_fast, dependants simply never become ready.
      }
      cv.notify_all();
    }
  };

  int workers = std::max(1, config.workers);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker_fn, i);
  for (std::thread& t : pool) t.join();

  if (failure) {
    trace.outcome = Outcome::TaskFailed;
    trace.failed_task = failure->first;
    trace.failure_reason = failure->second;
  } else if (done.size() == graph.nodes.size()) {
    trace.outcome = Outcome::Completed;
  } else {
    trace.outcome = Outcome::CycleDetected;
    for (const TaskNode& node : graph.nodes) {
      if (done.count(node.id) == 0) trace.remaining.push_back(node.id);
    }
  }
  return trace;
}

std::string serialize_trace(const ExecutionTrace& trace) {
  std::string out;
  for (const TraceEvent& event : trace.events) {
    out += "EVT " + std::to_string(event.seq) +
           (event.phase == TracePhase::Start ? " START " : " END ") +
           event.task + " worker=" + std::to_string(event.worker) + "\n";
  }
  switch (trace.outcome) {
    case Outcome::Completed:
      out += "OUTCOME completed\n";
      break;
    case Outcome::CycleDetected: {
      out += "OUTCOME cycle_detected:";
      bool first = true;
      for (const std::string& id : trace.remaining) {
        if (!first) out += ",";
        first = false;
        out += id;
      }
      out += "\n";
      break;
    }
    case Outcome::TaskFailed:
      out += "OUTCOME task_failed:" + trace.failed_task + "\n";
      break;
  }
  return out;
}

}  // namespace depl
