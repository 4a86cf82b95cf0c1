#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rslab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvariant = 2;

/// Runs one subcommand; `args` excludes the program name. Results go to `out`
/// unless --out names a file, diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rslab::cli
