#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include "dgs/errors.hpp"

namespace dgs {

// Shortest decimal that round-trips the exact double. All CSV/SVG output
// goes through this so artifacts are byte-stable across runs.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{})
        throw IoError("cannot parse floating-point value: `" + s + "`");
    return v;
}

} // namespace dgs
