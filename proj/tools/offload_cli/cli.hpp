#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace offload::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidInput = 1,  // parse or validation failure, bad flags
    kExitSimulation = 2,    // any failure while computing
};

/// Runs one command line (without the program name) and returns the exit
/// code. Reports go to `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace offload::cli
