#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sflab::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kNumericalFailure = 3 };

// Runs the sflab command line with args[0] as the program name. Results go
// to out (or the --out file), diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:b:n:log" or "a:b:n:lin".
std::vector<double> parse_radii(const std::string& spec);

}  // namespace sflab::cli
