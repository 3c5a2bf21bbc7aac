#pragma once

// Command dispatch behind the `gqr` executable.

#include <iosfwd>
#include <string>
#include <vector>

namespace gqr::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kVerificationFailed = 2,
  kCapExceeded = 3,
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gqr::cli
