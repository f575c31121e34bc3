#include "cacwb/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cacwb {

namespace {

int significant_digits(const std::string& s) {
    int count = 0;
    bool leading = true;
    for (char ch : s) {
        if (ch == 'e' || ch == 'E') break;
        if (ch < '0' || ch > '9') continue;
        if (leading && ch == '0') continue;
        leading = false;
        ++count;
    }
    return count;
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof buf, x); // shortest round trip
    std::string shortest(buf, result.ptr);
    if (significant_digits(shortest) <= 12) return shortest;
    std::snprintf(buf, sizeof buf, "%.12g", x); // dialect cap
    return buf;
}

} // namespace cacwb
