#pragma once

// Command-line front end: encode, decode, audit and security subcommands.
//
// Reports share one JSON layout, {command, params, results, residuals, verdict, seed}; csv and
// text formats flatten the same tree into dotted keys.

#include <iosfwd>

namespace sdc::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kValidation = 2,
    kDecodeFailure = 3,
    kSecurityAbort = 4,
};

/// Runs one invocation. Reports go to `out` (or the --output file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdc::cli
