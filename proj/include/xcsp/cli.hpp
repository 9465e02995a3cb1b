#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xcsp {

/// Process exit statuses.
enum ExitCode : int {
  exit_ok = 0,        // valid, satisfied, solution found, formula true
  exit_negative = 1,  // invalid, unsatisfied, no solution, formula false
  exit_usage = 2,     // bad arguments, unreadable input, mode unfit for the instance
  exit_hard = 3,      // load failure, bad assignment values, evaluation failure, budget exhausted
};

/// Environment variable overriding the default node budget of `solve`.
inline constexpr const char* node_limit_env = "XCSP21_NODE_LIMIT";

/// Runs one command. `args` excludes the program name. A path of "-" reads
/// the document from `in`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace xcsp
