#pragma once

namespace catto {

// Entry point of the command-line tool. Returns the process exit code:
// 0 = ok / commit may proceed, 1 = tests failed and blocked, 2 = usage or
// parse error, 3 = internal error.
int run_cli(int argc, char** argv);

} // namespace catto
