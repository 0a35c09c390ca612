#include "scalarmap/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace scalarmap {

std::string format_real(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string format_fixed6(double value) {
    if (value == 0.0) value = 0.0;
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 6);
    std::string out(buf.data(), ptr);
    if (out == "-0.000000") out = "0.000000";
    return out;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace scalarmap
