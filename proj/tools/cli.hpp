#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qtrace::cli {

// Runs the command line (without the program name).  Returns the exit status:
// 0 success / PASS, 1 FAIL, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtrace::cli
