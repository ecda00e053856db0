#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imcergo::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_load_error = 2,
    exit_internal = 3,
    exit_no_convergence = 4,
    exit_cap_exceeded = 5,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// warnings and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace imcergo::cli
