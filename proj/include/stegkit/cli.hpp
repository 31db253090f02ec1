#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stegkit {

// Exit codes of the stegkit command line.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNothingFound = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDataError = 3;

// Runs one command line; argv[0] is the program name. Payloads and extracted
// data without --out go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace stegkit
