#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace copa::cli {

// Runs the command line `args` (args[0] is the program name) and returns the
// process exit code: 0 success, 1 usage/config, 2 data, 3 infeasible.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace copa::cli
