#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tgrid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `tgrid` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Asks a running `serve` to shut down. Safe to call from any thread.
void request_shutdown();

}  // namespace tgrid::cli
