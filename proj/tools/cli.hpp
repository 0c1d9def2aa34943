#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace micvib::cli {

enum class exit_status : int { ok = 0, validation = 1, numerical = 2 };

// Runs one subcommand. `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace micvib::cli
