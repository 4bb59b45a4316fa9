#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mlcd::cli {

/// Runs one command line (args[0] is the program name). Returns 0 on
/// success, 1 on usage errors and 2 on data or convergence errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlcd::cli
