#pragma once

#include <iosfwd>

namespace lifisim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;  ///< user or configuration error
inline constexpr int kExitIo = 3;

/// Entry point for the `lifisim` tool; writes results to `out` and
/// diagnostics to `err`, and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lifisim::cli
