#pragma once

#include <iosfwd>

namespace survbound {

/// Entry point of the `survbound` tool. Exit codes: 0 success, 1 usage,
/// 2 invalid input, 3 computation failed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace survbound
