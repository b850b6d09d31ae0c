#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dplab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Parses "start:stop:step" (endpoints included within half a step),
/// "a,b,c", or a single number. Throws ValidationError on an empty or malformed grid.
std::vector<double> parse_grid(std::string_view text);

/// Parses "lo:hi" into two numbers with lo <= hi.
std::pair<double, double> parse_window(std::string_view text);

/// Shortest round-trip decimal; throws NumericalError on NaN or infinity.
std::string format_number(double v);

/// Runs one subcommand (args exclude the program name). Results go to `out`
/// unless --out names a file; diagnostics go to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dplab::cli
