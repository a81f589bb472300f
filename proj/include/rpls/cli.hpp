#pragma once

#include <string>
#include <vector>

namespace rpls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `rpls` tool. `args` excludes the program name.
/// Returns the process exit code; diagnostics go to stderr.
int cli_main(const std::vector<std::string> &args);

} // namespace rpls::cli
