#pragma once

#include <cstdio>
#include <string>

namespace mdfit {

inline constexpr int kCsvDigits = 12;
inline constexpr int kTableDigits = 4;

/// printf-style %.{digits}g, so output is locale-independent and stable.
inline std::string fmt_sig(double v, int digits = kCsvDigits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

} // namespace mdfit
