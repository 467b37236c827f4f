#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fbstab::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitCertificateFailed = 2;

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf("%.17g") in the C locale; the CSV number format.
std::string format_number(double v);

}  // namespace fbstab::cli
