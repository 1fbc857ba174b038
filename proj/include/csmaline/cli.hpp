#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csmaline {

/// Exit status: 0 success, 1 computation error, 2 usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csmaline
