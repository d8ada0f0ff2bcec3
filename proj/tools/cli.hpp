#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hpencil::cli {

/// Exit codes: 0 success, 1 usage, 2 input validation, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpencil::cli
