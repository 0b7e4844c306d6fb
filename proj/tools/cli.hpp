#pragma once

#include <ostream>

namespace curvisynth::cli {

/// Exit codes: 0 success, 1 usage error, 2 runtime error.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRuntime = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace curvisynth::cli
