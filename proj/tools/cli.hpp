#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scalarmap::cli {

/// Parses arguments (argv[0] included), runs the chosen subcommand and returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scalarmap::cli
