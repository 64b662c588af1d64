#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confpred {

// Full command-line driver; args excludes the program name.
// Returns the process exit code: 0 success, 1 bad input or unmet model
// precondition, 2 unexpected internal failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confpred
