#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fintopos {

/// Exit status of run_cli.
enum ExitCode : int {
  kExitOk = 0,       // every check passed
  kExitFailed = 1,   // a check failed or could not finish inside the budget
  kExitUsage = 2,    // bad arguments, unreadable or malformed workspace
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out` (or to files under --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fintopos
