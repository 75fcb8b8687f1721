// Command-line surface over the deployment pipeline:
//
//   validate  parse a configuration and report problems
//   plan      compile it into a task graph (DOT or text)
//   deploy    execute the graph against a simulated runtime
//   convert   re-emit a configuration in the native format
//
// Exit codes: 0 success, 1 parse error (or unreadable input), 2 validation
// error, 3 compile/capability error, 4 cycle detected, 5 task failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "depl/adl_format.hpp"
#include "depl/backends.hpp"
#include "depl/engine.hpp"
#include "depl/native_format.hpp"
#include "depl/plan_runner.hpp"
#include "depl/planner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kParseError = 1;
constexpr int kValidationError = 2;
constexpr int kCompileError = 3;
constexpr int kCycleDetected = 4;
constexpr int kTaskFailed = 5;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Whole files only: write beside the target, then rename into place.
bool write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    if (!out) return false;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

// Grammar-level problems are parse errors; everything else the parser
// reports (unresolved references, duplicates, inconsistent models) counts
// as a validation error.
int diagnostics_exit_code(const std::vector<depl::ParseDiagnostic>& diags) {
  for (const depl::ParseDiagnostic& d : diags) {
    if (d.code == depl::diag::kSyntax ||
        d.code == depl::diag::kUnsupportedElement) {
      return kParseError;
    }
  }
  return kValidationError;
}

std::optional<depl::Configuration> load(const std::string& path,
                                        const std::string& format,
                                        int& exit_code) {
  std::optional<std::string> text = read_file(path);
  if (!text) {
    std::cout << "error: cannot read " << path << "\n";
    exit_code = kParseError;
    return std::nullopt;
  }
  depl::ParseResult<depl::Configuration> result =
      format == "adl" ? depl::parse_adl(*text) : depl::parse_native(*text);
  if (!result.ok()) {
    for (const depl::ParseDiagnostic& d : result.diagnostics) {
      std::cout << depl::format_diagnostic(d, path) << "\n";
    }
    exit_code = diagnostics_exit_code(result.diagnostics);
    return std::nullopt;
  }
  return std::move(result.value);
}

depl::BackendCapabilities capabilities_for(const std::string& backend) {
  return {backend, backend == "hier"};
}

int run_plan(const depl::Configuration& config, const std::string& backend,
             const std::string& out) {
  depl::Result<depl::TaskGraph> graph =
      depl::compile(config, capabilities_for(backend));
  if (!graph.ok()) {
    std::cout << "error: [" << graph.error().code << "] "
              << graph.error().message << "\n";
    return kCompileError;
  }
  std::cout << (out == "text" ? depl::graph_to_text(graph.value())
                              : depl::graph_to_dot(graph.value()));
  return kOk;
}

struct DeployOptions {
  std::string backend = "flat";
  int workers = 1;
  std::string trace_path;
  std::string snapshot_path;
  std::string fail_task;
  std::vector<std::string> cycle_edges;  // "from-id,to-id" pairs
};

int run_deploy(const depl::Configuration& config,
               const DeployOptions& options) {
  depl::Result<depl::TaskGraph> compiled =
      depl::compile(config, capabilities_for(options.backend));
  if (!compiled.ok()) {
    std::cout << "error: [" << compiled.error().code << "] "
              << compiled.error().message << "\n";
    return kCompileError;
  }
  depl::TaskGraph graph = std::move(compiled.value());

  for (const std::string& spec : options.cycle_edges) {
    auto comma = spec.find(',');
    if (comma == std::string::npos) {
      std::cout << "error: --cycle-edge expects <from-id>,<to-id>\n";
      return kParseError;
    }
    depl::DependencyEdge edge{spec.substr(0, comma), spec.substr(comma + 1),
                              depl::InterfaceKind::InstanceConfiguration,
                              depl::EdgeRole::None};
    if (graph.find(edge.from) == nullptr || graph.find(edge.to) == nullptr) {
      std::cout << "error: --cycle-edge names an unknown task id\n";
      return kParseError;
    }
    graph.edges.push_back(std::move(edge));
  }

  std::unique_ptr<depl::Runtime> runtime =
      depl::make_runtime(options.backend, config.types);
  depl::PlanRunner runner(*runtime);
  if (!options.fail_task.empty()) runner.fail_task(options.fail_task);

  depl::EngineConfig engine_config;
  engine_config.workers = options.workers;
  depl::ExecutionTrace trace =
      depl::execute(graph, runner.executor(), engine_config);

  switch (trace.outcome) {
    case depl::Outcome::CycleDetected: {
      std::string ids;
      for (const std::string& id : trace.remaining) {
        if (!ids.empty()) ids += ",";
        ids += id;
      }
      std::cout << "error: cycle detected; unexecuted tasks: " << ids << "\n";
      return kCycleDetected;
    }
    case depl::Outcome::TaskFailed:
      std::cout << "error: task " << trace.failed_task
                << " failed: " << trace.failure_reason << "\n";
      return kTaskFailed;
    case depl::Outcome::Completed:
      break;
  }

  if (!options.trace_path.empty() &&
      !write_atomic(options.trace_path, depl::serialize_trace(trace))) {
    std::cout << "error: cannot write " << options.trace_path << "\n";
    return kParseError;
  }
  if (!options.snapshot_path.empty()) {
    const std::string snapshot = depl::serialize_snapshot(
        runtime->snapshot(), runner.instance_names());
    if (!write_atomic(options.snapshot_path, snapshot)) {
      std::cout << "error: cannot write " << options.snapshot_path << "\n";
      return kParseError;
    }
  }
  std::cout << "completed " << graph.nodes.size() << " tasks\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"component deployment pipeline"};
  app.require_subcommand(1);

  std::string file;
  std::string format = "native";
  std::string backend = "flat";
  std::string out = "dot";
  std::string convert_from = "native";
  std::string convert_to = "native";
  DeployOptions deploy_options;

  const auto format_check = CLI::IsMember({"native", "adl"});
  const auto backend_check = CLI::IsMember({"flat", "hier"});

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "parse a configuration and check it");
  validate_cmd->add_option("file", file, "configuration file")->required();
  validate_cmd->add_option("--format", format, "input format")
      ->check(format_check)
      ->capture_default_str();

  CLI::App* plan_cmd =
      app.add_subcommand("plan", "compile a configuration into a task graph");
  plan_cmd->add_option("file", file, "configuration file")->required();
  plan_cmd->add_option("--format", format, "input format")
      ->check(format_check)
      ->capture_default_str();
  plan_cmd->add_option("--backend", backend, "target backend")
      ->check(backend_check)
      ->capture_default_str();
  plan_cmd->add_option("--out", out, "output form")
      ->check(CLI::IsMember({"dot", "text"}))
      ->capture_default_str();

  CLI::App* deploy_cmd =
      app.add_subcommand("deploy", "execute the task graph on a backend");
  deploy_cmd->add_option("file", file, "configuration file")->required();
  deploy_cmd->add_option("--format", format, "input format")
      ->check(format_check)
      ->capture_default_str();
  deploy_cmd->add_option("--backend", deploy_options.backend, "target backend")
      ->check(backend_check)
      ->capture_default_str();
  deploy_cmd->add_option("--workers", deploy_options.workers,
                         "parallel workers")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  deploy_cmd->add_option("--trace", deploy_options.trace_path,
                         "write the execution trace here");
  deploy_cmd->add_option("--snapshot", deploy_options.snapshot_path,
                         "write the final runtime snapshot here");
  deploy_cmd->add_option("--fail-task", deploy_options.fail_task,
                         "make this task fail (failure-path testing)");
  deploy_cmd->add_option("--cycle-edge", deploy_options.cycle_edges,
                         "inject a <from-id>,<to-id> dependency "
                         "(cycle-path testing)");

  CLI::App* convert_cmd =
      app.add_subcommand("convert", "re-emit a configuration as native text");
  convert_cmd->add_option("file", file, "configuration file")->required();
  convert_cmd->add_option("--from", convert_from, "input format")
      ->check(format_check)
      ->capture_default_str();
  convert_cmd->add_option("--to", convert_to, "output format")
      ->check(CLI::IsMember({"native"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParseError;
  }

  int exit_code = kOk;
  if (validate_cmd->parsed()) {
    std::optional<depl::Configuration> config = load(file, format, exit_code);
    if (!config) return exit_code;
    std::cout << "OK\n";
    return kOk;
  }
  if (plan_cmd->parsed()) {
    std::optional<depl::Configuration> config = load(file, format, exit_code);
    if (!config) return exit_code;
    return run_plan(*config, backend, out);
  }
  if (deploy_cmd->parsed()) {
    std::optional<depl::Configuration> config = load(file, format, exit_code);
    if (!config) return exit_code;
    return run_deploy(*config, deploy_options);
  }
  if (convert_cmd->parsed()) {
    std::optional<depl::Configuration> config =
        load(file, convert_from, exit_code);
    if (!config) return exit_code;
    std::cout << depl::emit_native(*config);
    return kOk;
  }
  return kOk;
}
