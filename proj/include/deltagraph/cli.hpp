#pragma once

#include <iosfwd>

namespace deltagraph {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBudgetExceeded = 2;
inline constexpr int kExitUsage = 3;

// Full command-line entry point; writes results to `out`, diagnostics to
// `err`, and returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deltagraph
