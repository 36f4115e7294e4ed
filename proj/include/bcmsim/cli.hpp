#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcmsim {

// Entry point behind the bcmsim binary. args excludes the program name.
// Exit status: 0 success, 2 usage or configuration error, 3 domain error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcmsim
