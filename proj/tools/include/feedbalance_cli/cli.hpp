#pragma once

namespace feedbalance::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `feedbalance` command; returns the process exit code.
int RunCli(int argc, const char* const* argv);

}  // namespace feedbalance::cli
