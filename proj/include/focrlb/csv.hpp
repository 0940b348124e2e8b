#pragma once

#include <cstdio>
#include <string>

namespace focrlb {

/// Formats a double with 17 significant digits ('.' decimal separator).
inline std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// CSV fields must not introduce extra columns; commas in free-text error
/// messages are replaced.
inline std::string csv_sanitize(std::string s) {
    for (auto& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

} // namespace focrlb
