#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weylkit::cli {

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// code: 0 success, 2 invalid input, 1 numeric failure (report still written).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names of all subcommands, in help order.
std::vector<std::string> subcommands();

}  // namespace weylkit::cli
