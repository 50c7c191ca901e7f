#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace ctd::detail {

// shortest decimal form that round-trips to the same double
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// fixed 17 significant digits, also round-trip exact
inline std::string format_double17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

} // namespace ctd::detail
