#pragma once

namespace hypvor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBand = 2;

/// Parses argv, runs the selected subcommand and returns the exit code.
int run(int argc, char** argv);

}  // namespace hypvor::cli
