#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causalflip::cli {

// Runs one pipeline stage. `args` excludes the program name. Returns the
// process exit status; usage and help text go to `out`/`err`.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_subcommand(const std::vector<std::string>& args);

}  // namespace causalflip::cli
