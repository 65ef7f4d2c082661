#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace momentlab::cli {

/// Runs the command line in-process. args excludes the program name. Returns the exit code:
/// 0 success, 2 input error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace momentlab::cli
