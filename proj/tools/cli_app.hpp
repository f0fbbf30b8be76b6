#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cstareq::cli {

// Entry point shared by the binary and the CLI tests.  Returns the process
// exit code: 0 success, 1 --expect mismatch, 2 parse error, 3 precondition
// violation.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cstareq::cli
