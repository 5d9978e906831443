#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qconvex {

/// Exit codes of the qconvex tool.
enum ExitCode : int {
  kExitOk = 0,         // success, or the checked condition holds
  kExitViolated = 1,   // check / gradcheck found a violation
  kExitUsage = 2,      // bad flags, unreadable or malformed files
};

/// Runs one qconvex command. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qconvex
