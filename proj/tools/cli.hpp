#pragma once

// Command-line front end. Exit codes: 0 success, 1 domain/validation
// failures, 2 I/O or parse errors.

#include <ostream>
#include <string>
#include <vector>

namespace wittcalc::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wittcalc::cli
