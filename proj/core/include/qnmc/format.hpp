#pragma once

#include <charconv>
#include <string>

namespace qnmc {

/// Shortest decimal form that parses back to the identical double.
/// Negative zero is canonicalized to "0" so outputs stay stable across
/// sign-of-zero differences in intermediate arithmetic.
inline std::string format_double(double v) {
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace qnmc
