#pragma once

// Paths and process plumbing shared by the test binaries.

#include <string>
#include <vector>

namespace depl::testing {

std::string fixture_path(const std::string& name);
std::string golden_path(const std::string& name);
std::string cli_path();

std::string read_file_or_die(const std::string& path);

/// Fresh file path under the system temp directory; parents exist.
std::string temp_file(const std::string& stem);

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

/// Runs the deployment tool with the given arguments.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace depl::testing
