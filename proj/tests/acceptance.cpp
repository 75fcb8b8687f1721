// End-to-end acceptance gate. Each criterion prints exactly one PASS or
// FAIL line; the exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "depl/adl_format.hpp"
#include "depl/backends.hpp"
#include "depl/engine.hpp"
#include "depl/native_format.hpp"
#include "depl/plan_runner.hpp"
#include "depl/planner.hpp"
#include "support/api_fuzzer.hpp"
#include "support/generator.hpp"
#include "support/model_fixtures.hpp"
#include "support/oracles.hpp"
#include "support/test_env.hpp"

using namespace depl;
using namespace depl::testing;

namespace {

const BackendCapabilities kFlat{"flat", false};
const BackendCapabilities kHier{"hier", true};

// Brute-forced count of valid orderings of the reference plan; frozen as a
// regression guard for both the plan shape and the enumerator.
constexpr std::size_t kReferenceOrderings = 504;

Result<std::uint64_t> run_ok(const TaskNode&, const TaskInputs&) {
  return std::uint64_t{1};
}

std::string code_of(const Status& status) {
  return status.ok() ? "OK" : status.error().code;
}

template <typename T>
std::string code_of(const Result<T>& result) {
  return result.ok() ? "OK" : result.error().code;
}

TaskGraph reference_graph() {
  auto compiled = compile(client_server_configuration(), kFlat);
  return std::move(compiled).value();
}

/// Compiles and deploys, returning the serialized final state ("" plus a
/// problem note on any failure).
std::string deploy_snapshot(const Configuration& config,
                            const std::string& backend,
                            const EngineConfig& engine_config,
                            std::string& problem) {
  auto runtime = make_runtime(backend, config.types);
  auto compiled = compile(config, runtime->capabilities());
  if (!compiled.ok()) {
    problem = "compile failed: " + compiled.error().code;
    return "";
  }
  PlanRunner runner(*runtime);
  ExecutionTrace trace =
      execute(compiled.value(), runner.executor(), engine_config);
  if (trace.outcome != Outcome::Completed) {
    problem = "deployment did not complete";
    return "";
  }
  std::string trace_issue = trace_problems(compiled.value(), trace);
  if (!trace_issue.empty()) {
    problem = "trace problem: " + trace_issue;
    return "";
  }
  return serialize_snapshot(runtime->snapshot(), runner.instance_names());
}

// --- Criterion 1: the reference configuration compiles to the expected
// plan shape, rendered byte-identically, in well under a second.

std::string criterion_reference_plan() {
  const auto started = std::chrono::steady_clock::now();

  auto parsed = parse_native(read_file_or_die(fixture_path("client_server.native")));
  if (!parsed.ok()) return "reference fixture failed to parse";
  auto compiled = compile(parsed.value, kFlat);
  if (!compiled.ok()) return "reference fixture failed to compile";
  const TaskGraph& graph = compiled.value();
  const std::string dot = graph_to_dot(graph);

  const auto elapsed = std::chrono::steady_clock::now() - started;

  std::map<TaskKind, int> counts;
  for (const TaskNode& node : graph.nodes) ++counts[node.kind];
  const std::map<TaskKind, int> expected_counts{
      {TaskKind::Installation, 2},   {TaskKind::Instantiation, 2},
      {TaskKind::AttributeSetter, 2}, {TaskKind::BindingGetter, 1},
      {TaskKind::BindingSetter, 1},  {TaskKind::Initialization, 2}};
  if (counts != expected_counts) return "task kind counts are off";
  if (graph.edges.size() != 13) {
    return "expected 13 dependencies, got " +
           std::to_string(graph.edges.size());
  }
  if (dot != read_file_or_die(golden_path("client_server.dot"))) {
    return "DOT rendering differs from the golden file";
  }
  if (elapsed >= std::chrono::seconds(1)) {
    return "parse+compile+render took a full second or more";
  }
  return "";
}

// --- Criterion 2: every schedule the engine produces is a linear
// extension of its plan, at several worker counts, across many plans.

std::string criterion_linear_extensions() {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Configuration config = random_configuration(seed);
    auto compiled = compile(config, kHier);
    if (!compiled.ok()) {
      return "seed " + std::to_string(seed) + ": compile failed";
    }
    for (int workers : {1, 2, 8}) {
      EngineConfig engine_config;
      engine_config.workers = workers;
      ExecutionTrace trace =
          execute(compiled.value(), run_ok, engine_config);
      if (trace.outcome != Outcome::Completed) {
        return "seed " + std::to_string(seed) + " workers " +
               std::to_string(workers) + ": did not complete";
      }
      std::string problem = trace_problems(compiled.value(), trace);
      if (!problem.empty()) {
        return "seed " + std::to_string(seed) + " workers " +
               std::to_string(workers) + ": " + problem;
      }
    }
  }
  return "";
}

// --- Criterion 3: the single-worker schedule is one of the exhaustively
// enumerated valid orderings of the reference plan.

std::string criterion_bruteforce() {
  const TaskGraph graph = reference_graph();
  const auto extensions = linear_extensions(graph, 10000);
  if (extensions.empty()) return "enumeration overflowed its limit";
  if (extensions.size() != kReferenceOrderings) {
    return "expected " + std::to_string(kReferenceOrderings) +
           " orderings, enumerated " + std::to_string(extensions.size());
  }
  ExecutionTrace trace = execute(graph, run_ok, EngineConfig{});
  if (trace.outcome != Outcome::Completed) return "execution did not complete";
  const std::vector<std::string> order = trace_task_order(trace);
  if (std::find(extensions.begin(), extensions.end(), order) ==
      extensions.end()) {
    return "the observed schedule is not a valid ordering";
  }
  return "";
}

// --- Criterion 4: injected dependency cycles are detected and reported
// with exactly the tasks that could not run, in the library and end to end.

std::string criterion_cycles() {
  for (int k : {2, 3, 5}) {
    TaskGraph graph;
    std::vector<std::string> cycle_ids;
    for (int i = 0; i < k; ++i) cycle_ids.push_back("cyc" + std::to_string(i));
    for (const std::string& id : cycle_ids) {
      graph.nodes.push_back(
          {id, TaskKind::Instantiation, id, std::nullopt, std::nullopt});
    }
    graph.nodes.push_back({"down", TaskKind::Instantiation, "down",
                           std::nullopt, std::nullopt});
    graph.nodes.push_back({"free", TaskKind::Instantiation, "free",
                           std::nullopt, std::nullopt});
    for (int i = 0; i < k; ++i) {
      graph.edges.push_back({cycle_ids[static_cast<std::size_t>(i)],
                             cycle_ids[static_cast<std::size_t>((i + 1) % k)],
                             InterfaceKind::InstanceProvider,
                             EdgeRole::None});
    }
    graph.edges.push_back({"cyc0", "down", InterfaceKind::InstanceProvider,
                           EdgeRole::None});

    ExecutionTrace trace = execute(graph, run_ok, EngineConfig{});
    if (trace.outcome != Outcome::CycleDetected) {
      return "k=" + std::to_string(k) + ": cycle not detected";
    }
    std::vector<std::string> expected_remaining = cycle_ids;
    expected_remaining.push_back("down");
    if (trace.remaining != expected_remaining) {
      return "k=" + std::to_string(k) + ": wrong unexecuted set";
    }
    if (trace_task_order(trace) != std::vector<std::string>{"free"}) {
      return "k=" + std::to_string(k) + ": independent task did not run";
    }
    std::string problem = trace_problems(graph, trace);
    if (!problem.empty()) return "k=" + std::to_string(k) + ": " + problem;
  }

  CliResult cli =
      run_cli({"deploy", fixture_path("client_server.native"), "--cycle-edge",
               "Initialization/cli,Instantiation/cli"});
  if (cli.exit_code != 4) {
    return "CLI exit code " + std::to_string(cli.exit_code) + ", expected 4";
  }
  if (cli.output !=
      "error: cycle detected; unexecuted tasks: AttributeSetter/cli/nom,"
      "BindingSetter/cli/s,Initialization/cli,Instantiation/cli\n") {
    return "CLI cycle report differs from the expected message";
  }
  return "";
}

// --- Criterion 5: the final runtime state depends only on the
// configuration, not on worker count or tie-breaking.

std::string criterion_schedule_independence() {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Configuration config = random_configuration(seed);
    const std::string expected = expected_snapshot(config);
    for (int workers : {1, 2, 4}) {
      for (int perturbation = 0; perturbation < 10; ++perturbation) {
        EngineConfig engine_config;
        engine_config.workers = workers;
        if (perturbation > 0) {
          engine_config.tie_break_seed =
              static_cast<std::uint64_t>(perturbation);
        }
        std::string problem;
        std::string snapshot =
            deploy_snapshot(config, "hier", engine_config, problem);
        if (!problem.empty()) {
          return "seed " + std::to_string(seed) + ": " + problem;
        }
        if (snapshot != expected) {
          return "seed " + std::to_string(seed) + " workers " +
                 std::to_string(workers) + " perturbation " +
                 std::to_string(perturbation) +
                 ": snapshot differs from the predicted state";
        }
      }
    }
  }
  return "";
}

// --- Criterion 6: flat and hierarchical backends reach identical states
// on hierarchy-free configurations, and hierarchy is cleanly rejected
// where unsupported.

std::string criterion_backend_equivalence() {
  GeneratorOptions options;
  options.allow_hierarchy = false;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Configuration config = random_configuration(seed, options);
    std::string problem;
    std::string flat =
        deploy_snapshot(config, "flat", EngineConfig{}, problem);
    if (!problem.empty()) {
      return "seed " + std::to_string(seed) + " (flat): " + problem;
    }
    std::string hier =
        deploy_snapshot(config, "hier", EngineConfig{}, problem);
    if (!problem.empty()) {
      return "seed " + std::to_string(seed) + " (hier): " + problem;
    }
    if (flat != hier) {
      return "seed " + std::to_string(seed) + ": backends disagree";
    }
  }

  auto rejected = compile(hier_configuration(), kFlat);
  if (rejected.ok() ||
      rejected.error().code != compile_error::kHierarchyUnsupported) {
    return "flat backend accepted a hierarchical configuration";
  }
  CliResult cli = run_cli({"deploy", fixture_path("hier.native")});
  if (cli.exit_code != 3) {
    return "CLI exit code " + std::to_string(cli.exit_code) + ", expected 3";
  }
  return "";
}

// --- Criterion 7: parsing and emission are lossless, and both dialects
// describe the same plans.

std::string criterion_roundtrip() {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Configuration config = random_configuration(seed);
    auto reparsed = parse_native(emit_native(config));
    if (!reparsed.ok()) {
      return "seed " + std::to_string(seed) + ": emitted text failed to parse";
    }
    if (!(reparsed.value == canonical(config))) {
      return "seed " + std::to_string(seed) + ": round-trip changed the model";
    }
  }

  for (const char* stem : {"client_server", "hier"}) {
    auto native = parse_native(
        read_file_or_die(fixture_path(std::string(stem) + ".native")));
    auto adl =
        parse_adl(read_file_or_die(fixture_path(std::string(stem) + ".adl")));
    if (!native.ok() || !adl.ok()) {
      return std::string(stem) + ": fixture failed to parse";
    }
    auto native_graph = compile(native.value, kHier);
    auto adl_graph = compile(adl.value, kHier);
    if (!native_graph.ok() || !adl_graph.ok()) {
      return std::string(stem) + ": fixture failed to compile";
    }
    if (!same_shape(native_graph.value(), adl_graph.value())) {
      return std::string(stem) + ": the two dialects plan differently";
    }
  }
  return "";
}

// --- Criterion 8: the runtime API holds up under ten thousand random
// valid calls, and every documented error code is reachable.

std::string criterion_api_robustness() {
  std::vector<ComponentType> registry = client_server_configuration().types;
  registry.push_back(
      {"Other", {{"o", PortDirection::Provided, "IOther"}}, {}, ""});

  auto fuzzed = make_runtime("hier", registry);
  FuzzOutcome outcome = run_api_fuzz(*fuzzed, registry, /*seed=*/2026,
                                     /*operations=*/10000);
  if (!outcome.ok()) return "fuzz: " + outcome.problem;
  if (outcome.operations < 10000) {
    return "fuzz stopped after " + std::to_string(outcome.operations) +
           " operations";
  }

  // Rejected calls must leave a started instance's state untouched.
  auto guard = make_runtime("flat", registry);
  auto started =
      guard->instantiate(guard->install("Server", "local").value());
  if (!guard->start(started.value()).ok()) return "guard start failed";
  const RuntimeSnapshot before = guard->snapshot();
  (void)guard->set_attribute(started.value(), "nom", Value("late"));
  (void)guard->start(started.value());
  if (!(guard->snapshot() == before)) {
    return "a rejected call mutated a started instance";
  }

  std::set<std::string> codes;
  auto runtime = make_runtime("flat", registry);
  codes.insert(code_of(runtime->install("Nope", "local")));
  codes.insert(code_of(runtime->instantiate(FactoryRef{0})));
  auto cli = runtime->instantiate(runtime->install("Client", "local").value());
  auto cli2 =
      runtime->instantiate(runtime->install("Client", "local").value());
  auto srv = runtime->instantiate(runtime->install("Server", "local").value());
  auto other =
      runtime->instantiate(runtime->install("Other", "local").value());
  codes.insert(
      code_of(runtime->set_attribute(cli.value(), "bogus", Value("x"))));
  codes.insert(code_of(
      runtime->set_attribute(cli.value(), "nom", Value(std::int64_t{1}))));
  codes.insert(code_of(runtime->get_binding(cli.value(), "s")));
  auto binding = runtime->get_binding(srv.value(), "s");
  (void)runtime->bind(cli.value(), "s", binding.value());
  codes.insert(code_of(runtime->bind(cli.value(), "s", binding.value())));
  auto other_binding = runtime->get_binding(other.value(), "o");
  codes.insert(
      code_of(runtime->bind(cli2.value(), "s", other_binding.value())));
  codes.insert(code_of(runtime->start(cli2.value())));
  (void)runtime->start(srv.value());
  codes.insert(code_of(runtime->start(srv.value())));
  codes.insert(
      code_of(runtime->add_sub_component(cli.value(), cli2.value(), "x")));
  auto hier = make_runtime("hier", registry);
  auto member =
      hier->instantiate(hier->install("Server", "local").value());
  codes.insert(code_of(
      hier->add_sub_component(member.value(), member.value(), "self")));

  const std::vector<std::string> all_codes{
      backend_error::kUnknownType,      backend_error::kStaleHandle,
      backend_error::kUnknownAttribute, backend_error::kTypeMismatch,
      backend_error::kAlreadyStarted,   backend_error::kUnknownPort,
      backend_error::kAlreadyBound,     backend_error::kInterfaceMismatch,
      backend_error::kUnsupported,      backend_error::kCycle,
      backend_error::kUnboundPort};
  for (const std::string& code : all_codes) {
    if (codes.count(code) == 0) return "error code never observed: " + code;
  }
  return "";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::string (*check)();
  };
  const Criterion criteria[] = {
      {"1. reference configuration compiles to the expected plan shape",
       criterion_reference_plan},
      {"2. every schedule is a linear extension of its plan",
       criterion_linear_extensions},
      {"3. the single-worker schedule is among the brute-forced orderings",
       criterion_bruteforce},
      {"4. dependency cycles are reported with the exact unexecuted tasks",
       criterion_cycles},
      {"5. final state is independent of workers and tie-breaking",
       criterion_schedule_independence},
      {"6. flat and hier backends agree on hierarchy-free configurations",
       criterion_backend_equivalence},
      {"7. parse and emit round-trip losslessly across dialects",
       criterion_roundtrip},
      {"8. the runtime API stays consistent under random and adversarial use",
       criterion_api_robustness},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const std::string problem = criterion.check();
    if (problem.empty()) {
      std::cout << "PASS: " << criterion.name << "\n";
    } else {
      ++failures;
      std::cout << "FAIL: " << criterion.name << " (" << problem << ")\n";
    }
  }
  return failures;
}
