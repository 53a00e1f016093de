#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eonsurv {

// Exit codes: 0 success, 1 configuration or usage error, 2 runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eonsurv
