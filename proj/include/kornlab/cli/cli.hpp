#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kornlab::cli {

/// Runs one command line (without the program name).  Reports go to the -o
/// file, or to `out` when -o is absent; diagnostics go to `err`.
/// Exit codes: 0 success, 1 validation error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kornlab::cli
