#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mlab::cli {

// Exit codes: 0 everything checked passed, 1 a violation was found (and
// reported), 2 usage or capacity error.
inline constexpr int exit_ok = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_usage = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mlab::cli
