#pragma once

#include <charconv>
#include <string>

namespace napsched::detail {

/// Shortest round-trip decimal form of a double; locale-independent.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace napsched::detail
