#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ontoscen {

// Runs the command-line front end on `args` (program name excluded), writing
// regular output to `out` and diagnostics to `err`. Returns the process exit
// code: 0 success, 1 i/o or parse failure, 2 validation or semantic failure,
// 64 usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// main() adapter: forwards argv[1..] to the stream overload on stdout/stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace ontoscen
