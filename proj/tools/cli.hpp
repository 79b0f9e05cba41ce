#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace utfsr::cli {

inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 1;

/// Runs the utfsr command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace utfsr::cli
