#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace hashlearn {

/// Shortest decimal form that parses back to exactly the same double.
/// Keeps emitted files both byte-stable and lossless.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace hashlearn
