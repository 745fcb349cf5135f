#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gbs {

/// Runs gbstool with `args` (without the program name).  Returns the exit
/// code: 0 success, 2 input error, 3 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbs
