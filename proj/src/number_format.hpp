#pragma once

#include <charconv>
#include <string>

namespace hbmut {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

inline void append_double(std::string& out, double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    out.append(buf, ptr);
}

} // namespace hbmut
