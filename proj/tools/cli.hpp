#pragma once

#include <string>
#include <vector>

namespace sfns::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit status.
int run(const std::vector<std::string>& args);

}  // namespace sfns::cli
