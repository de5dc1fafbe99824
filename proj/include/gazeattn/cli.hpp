#pragma once

#include <string>
#include <vector>

namespace gazeattn {

/// Entry point behind the `gazeattn` binary. Exit status: 0 success,
/// 1 validation/config error, 2 runtime error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // without program name

}  // namespace gazeattn
