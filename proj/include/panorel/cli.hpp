#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace panorel {

/// Runs the command line. `args` excludes the program name.
/// Returns 0 on success, 1 on a runtime failure (a JSON error object is written
/// to `err`), and 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace panorel
