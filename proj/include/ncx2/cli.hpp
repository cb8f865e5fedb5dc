#pragma once

#include <ostream>

namespace ncx2::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,             // bad flags or parameters outside the domain
    kApproxInapplicable = 3,
    kSolverFailure = 4,
};

/// Runs the command line `argv` (argv[0] is the program name). Table output goes
/// to `out` unless --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncx2::cli
