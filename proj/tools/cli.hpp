#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chshkit::cli {

/// Exit-code contract of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kInvalidState = 3,
  kEmptyData = 4,
};

/// Runs one command line (args excludes the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chshkit::cli
