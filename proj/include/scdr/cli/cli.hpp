#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scdr::cli {

enum ExitCode { kSuccess = 0, kUsage = 1, kDataError = 2, kInfeasible = 3, kSolverLimit = 4 };

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scdr::cli
