#pragma once

#include <string>
#include <string_view>

namespace scalarmap {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

/// Fixed six-decimal text; negative zero prints as "0.000000".
std::string format_fixed6(double value);

/// Quotes a CSV field when it contains a delimiter, quote or line break.
std::string csv_escape(std::string_view field);

}  // namespace scalarmap
