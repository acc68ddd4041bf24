#pragma once

#include <iosfwd>

namespace dcl::cli {

/// Exit codes: 0 success / PASS, 1 usage or validation error, 2 numerical failure or FAIL.
enum ExitCode { kOk = 0, kValidation = 1, kFailure = 2 };

/// Entry point of the command-line tool; the main report goes to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcl::cli
