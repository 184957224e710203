#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace macforge::cli {

// Full command-line entry point, in-process testable. Returns the exit
// status: 0 success, 1 usage error, 2 runtime failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace macforge::cli
