#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdpr::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSingularPose = 3;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdpr::cli
