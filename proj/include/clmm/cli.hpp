#pragma once

#include <iosfwd>

namespace clmm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. Human output goes to `out`; diagnostics and the
/// machine-readable error report (one JSON object per line) go to `err`.
/// Returns 0 on success, 1 on data errors, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clmm::cli
