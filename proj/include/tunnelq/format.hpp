#pragma once

#include <string>
#include <string_view>

namespace tunnelq {

/// Shortest general-format rendering with 12 significant digits.
std::string format_number(double value);

/// Locale-independent parse of the whole field; nullopt-like failure via bool.
bool parse_number(std::string_view text, double &out);

} // namespace tunnelq
