#pragma once

// Command-line front end: optimize, refine, explain-afm, sort and bench.

#include <ostream>
#include <string>
#include <vector>

namespace ordopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitTooLarge = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ordopt
