#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace catana::cli {

// Exit codes: 0 success, 1 usage error, 2 data or contract error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catana::cli
