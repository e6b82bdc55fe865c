#pragma once

#include <string>
#include <vector>

namespace gridcop {

// Entry point used by both the gridcop binary and the CLI tests.
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 numerical error.
int run_cli(const std::vector<std::string>& args);

}  // namespace gridcop
