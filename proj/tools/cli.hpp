#pragma once

#include <iosfwd>

namespace advwb::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // a check failed or a cap was hit
inline constexpr int kUsage = 2;   // bad flags or unreadable input

/// Runs one command line; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace advwb::cli
