#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kmig {

/// Shortest-form %g-style text with the given significant digits; 17 digits
/// round-trip every double exactly. Locale independent.
std::string format_number(double value, int significant_digits = 17);

/// Whole-token parse; nullopt on trailing garbage, empty input, or overflow.
std::optional<double> parse_number(std::string_view token);

std::vector<std::string_view> split_whitespace(std::string_view line);
std::vector<std::string_view> split_char(std::string_view line, char sep);

std::string_view trim(std::string_view s);

}  // namespace kmig
