#pragma once

#include <ostream>

namespace solvcheck::cli {

enum ExitCode : int { ok = 0, domain_error = 1, usage_error = 2 };

/// Full command-line entry point. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Applies SOLVCHECK_LOG (error, warn, info, debug). Returns false for an
/// unrecognised value.
bool configure_logging(const char* level);

}  // namespace solvcheck::cli
