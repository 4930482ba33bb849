#pragma once

#include <iosfwd>

namespace devrisk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

/// Runs one command line. `color` enables ANSI colors in table output.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace devrisk::cli
