#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace discern {

// Exit codes: 0 success, 2 invalid input, 3 search not-found,
// 4 reconstruction ambiguous-or-failed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discern
