#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace capdim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitUsage = 64;

/// Runs one command line (args[0] is the program name). Output goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace capdim
