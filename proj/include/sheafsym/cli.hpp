#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sheafsym::cli {

// Exit codes of run_command.
constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitMalformed = 2;

// Runs one subcommand (darboux, normal-form, check-symplectic, charpoly,
// eigen, sheaf-check, wedge) on a problem file and writes the report to
// `out`. `args` excludes the program name. A report is written on every
// path, including argument errors.
int run_command(const std::vector<std::string>& args, std::ostream& out);

}  // namespace sheafsym::cli
