#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reginv {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParseError = 2,       // bad arguments or malformed config document
    kExitValidationError = 3,  // well-formed input violating a model invariant
    kExitTruncation = 4,       // --strict and some evaluation hit the series cap
};

/// Runs one command line (args[0] is the program name). Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reginv
