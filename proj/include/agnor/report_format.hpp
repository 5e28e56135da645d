#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agnor {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// Empty string for std::nullopt.
std::string format_number(const std::optional<double>& value);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(std::string_view text);

std::string csv_row(const std::vector<std::string>& fields);

}  // namespace agnor
