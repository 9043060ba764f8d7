#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mindex::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitUndecided = 3,
  kExitNumeric = 4,
};

/// Runs the command line `args` (program name excluded), writing the JSON
/// report to `out` (or the --out file) and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mindex::cli
