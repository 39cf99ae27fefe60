#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpvssa::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kResourceLimit = 3,
};

/// Runs the command line `args` (args[0] is the program name). Reports go
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lpvssa::cli
