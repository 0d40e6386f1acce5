#include "kcmap/format.hpp"

#include <cmath>
#include <cstdio>

namespace kcmap {

std::string format_fixed6(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    double scaled = v * 1e6;
    if (std::fabs(scaled) >= 9.0e18) {
        char buf[512];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return buf;
    }
    // llrint honors the default rounding mode, which is ties-to-even.
    long long units = std::llrint(scaled);
    unsigned long long mag = units < 0 ? static_cast<unsigned long long>(-units)
                                       : static_cast<unsigned long long>(units);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%llu.%06llu", (units < 0 && mag != 0) ? "-" : "",
                  mag / 1000000ULL, mag % 1000000ULL);
    return buf;
}

} // namespace kcmap
