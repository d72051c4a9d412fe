#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;      ///< parse or validation error
inline constexpr int kExitNumerical = 3;  ///< non-convergence, unresolved result

/// Runs one shfkit invocation. `args` excludes the program name. Summaries go
/// to `out`, diagnostics to `err`. Relative --out paths are resolved under
/// SHFKIT_OUT_DIR when that variable is set.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shf::cli
