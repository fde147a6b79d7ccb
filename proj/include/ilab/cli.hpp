#pragma once

#include <string>
#include <vector>

namespace ilab::cli {

// Entry point for the impulselab command line tool. `args` holds the
// arguments after the program name. Returns the process exit code:
// 0 success, 1 usage/config error, 2 numerical failure, 3 hypothesis
// violation or failed certificate check.
int run(const std::vector<std::string>& args);

}  // namespace ilab::cli
