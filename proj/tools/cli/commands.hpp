#pragma once

#include <iosfwd>

namespace fbmre::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,        ///< flag, filter or config validation failure
    kSimulation = 3,   ///< simulation failed
    kEstimation = 4,   ///< estimation failed or the input grid is inconsistent
    kOutput = 5,       ///< output location not writable
};

/// Entry point of the `fbmre` tool. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbmre::cli
