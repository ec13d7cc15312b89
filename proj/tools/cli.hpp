#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slbi::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericError = 3;

/// Runs the tool on `args` (without the program name), writing human-readable
/// output to `out` and diagnostics to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slbi::cli
