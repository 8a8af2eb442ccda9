#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace uconvex {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitInput = 2,
  kExitRoute = 3,
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs the tool on args (without the program name); reports go to `out` unless --out is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uconvex
