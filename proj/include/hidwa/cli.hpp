#pragma once

#include <iosfwd>

namespace hidwa
{

// Entry point of the `hidwa` tool. Exit codes for `run`: 0 goal reached,
// 2 timed out, 1 error.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace hidwa
