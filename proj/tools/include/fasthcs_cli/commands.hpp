#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fasthcs::cli {

enum ExitCode : int {
  kSuccess = 0,
  kOutliersFound = 1,  // only with diagnose --fail-on-outliers
  kInputError = 2,
  kNumericalFailure = 3,
};

/// Runs the command line `args` (without the program name), writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fasthcs::cli
