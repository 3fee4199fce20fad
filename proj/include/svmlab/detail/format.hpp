#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace svmlab::detail {

/// Shortest decimal representation that parses back to the same double.
std::string shortest(double value);

/// Hexadecimal-significand encoding, e.g. "0x1.8p+1" or "-0x0p+0".
std::string hex_double(double value);

/// Parses either a hexadecimal-significand real (with "0x" prefix) or a
/// decimal real. Returns nullopt unless the whole string is consumed and the
/// result is finite.
std::optional<double> parse_double(std::string_view text);

/// Parses a decimal integer with an optional leading '+' or '-'.
std::optional<long long> parse_integer(std::string_view text);

} // namespace svmlab::detail
