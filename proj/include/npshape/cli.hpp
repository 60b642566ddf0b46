#pragma once

#include <string>
#include <vector>

namespace npshape {

// Command-line entry point. Returns the process exit code:
// 0 success, 1 numeric failure, 2 input error. Errors also emit a
// machine-readable JSON payload on stderr.
int run_cli(std::vector<std::string> args);

}  // namespace npshape
