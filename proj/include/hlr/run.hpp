#pragma once

#include <map>
#include <string>

namespace hlr::run {

/// Exit codes shared with the CLI: 0 success, 1 error, 2 converged-with-
/// warning (pass budget exhausted).
struct CommandResult {
  int exit_code = 0;
  std::string message;  // diagnostic for stderr / the C API error buffer
};

/// Execute one workflow (solve | study | profile | timeseries |
/// oracle-check) against a flat dotted-key configuration. Unknown keys and
/// malformed values are rejected with a qualified message.
CommandResult run_command(const std::string& command,
                          const std::map<std::string, std::string>& config);

}  // namespace hlr::run
