#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace permpat::cli {

/// Runs one command line (without the program name). Returns the exit
/// status: 0 success, 1 usage or parse error, 2 internal invariant breach.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permpat::cli
