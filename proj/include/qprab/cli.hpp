#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qprab::cli {

/// Exit codes of the qprab command.
enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,   ///< domain or usage error
    kCheckFailed = 2,  ///< convergence or verification failure
};

/// Runs `qprab <args...>` (args excludes the program name). The report goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qprab::cli
