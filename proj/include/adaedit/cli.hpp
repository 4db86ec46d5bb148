#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace adaedit {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // diff or patch failed
inline constexpr int kExitUsage = 2;

/// Runs the tool with `args` (without the program name). Failures are
/// reported as a one-line JSON object on `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

} // namespace adaedit
