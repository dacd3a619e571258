#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bandsurf::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kNumerical = 3 };

/// Parses and runs one command line (without the program name). Errors are
/// reported on `err` and mapped to an exit code; nothing is thrown.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bandsurf::cli
