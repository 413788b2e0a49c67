#pragma once

#include <string>
#include <vector>

namespace cqed {

// Command-line front end. `args` excludes the program name. Returns the
// process exit code: 0 success, 1 input error, 2 numerical failure. All
// diagnostics go to stderr as a single "cqed: error: ..." line.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace cqed
