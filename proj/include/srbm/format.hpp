#pragma once

#include <cstdio>
#include <string>

namespace srbm {

// Six significant digits, shortest form (printf %g correctly rounds to
// nearest, ties to even on the exact binary value). All user-facing numbers
// go through this so report lines are stable across platforms.
inline std::string sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

} // namespace srbm
