#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xbarsim::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kIo = 3,
};

/// Runs one command line (without the program name). Diagnostics go to `err`;
/// `stats`, and `eval` without --out, print to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xbarsim::cli
