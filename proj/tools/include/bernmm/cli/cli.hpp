#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bernmm::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kToleranceFailure = 1,
    kArgumentError = 2,
    kNonConvergence = 3,
    kIoError = 4,
};

inline constexpr const char* kSchemaVersion = "1";

/// Parses `args` (args[0] is the program name), runs the subcommand and writes
/// the report to `out` or to the --out file. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bernmm::cli
