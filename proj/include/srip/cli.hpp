#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace srip {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitContract = 3;

/// Runs one subcommand. `args` excludes the program name. Reports go to the
/// files named by flags, or to `out` when no JSON path is given; diagnostics
/// go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srip
