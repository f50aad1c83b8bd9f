#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ite::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command line (args excludes the program name). The artifact goes
/// to --output when given, otherwise to out; diagnostics go to err as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ite::cli
