#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moebius {

// Entry point of the command-line tool, separated from main() so tests can
// drive it in-process. args excludes the program name. Returns 0 when the
// requested computation passes, 1 on a verification or mathematical failure,
// 2 on a configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moebius
