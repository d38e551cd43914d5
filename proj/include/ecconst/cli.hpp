#pragma once

#include <iosfwd>
#include <string>

#include "ecconst/empirics.hpp"

namespace ecconst {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,  // verification failure or other runtime error
  kExitUsage = 2,
  kExitSingular = 3,
  kExitLevelBound = 4,
  kExitCache = 5,
};

// Entry point of the ecconst tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// CSV rows and the trailing '#' aggregate block written by `scan box`.
std::string scan_csv(const BoxScanResult& result);

}  // namespace ecconst
