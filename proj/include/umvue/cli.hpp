#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace umvue::cli {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args excludes the program name). Exit code 0 means
/// "yes"/success, 1 a "no" decision, 2 a usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace umvue::cli
