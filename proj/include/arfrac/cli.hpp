#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "arfrac/numeric.hpp"

namespace arfrac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;   // validation failure, missing file, bad config
inline constexpr int kExitAnalysis = 3;  // any other library error

inline constexpr std::string_view kVersion = "0.1.0";

/// "123", "1e9", "2.5e3", "2^30", "10^6"; the exact integer part of the
/// value. Throws Error(ParseError).
Integer parse_bound(std::string_view text);

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arfrac::cli
