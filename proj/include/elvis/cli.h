#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elvis::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

/// Runs `elvis <args...>` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace elvis::cli
