#pragma once

#include <iosfwd>

namespace hlab::cli {

enum ExitCode : int { kSuccess = 0, kAcceptanceFailure = 1, kUsageError = 2 };

/// Entry point of the `hlab` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hlab::cli
