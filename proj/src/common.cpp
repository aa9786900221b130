#include "archmap/common.hpp"

#include <algorithm>
#include <cstdio>

namespace archmap {

std::string big_to_string(BigCount v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double big_to_double(BigCount v) {
    double r = 0.0;
    // 64-bit halves; exactness is not required, only magnitude.
    auto hi = static_cast<std::uint64_t>(v >> 64);
    auto lo = static_cast<std::uint64_t>(v);
    r = static_cast<double>(hi) * 18446744073709551616.0 + static_cast<double>(lo);
    return r;
}

BigCount big_mul_checked(BigCount a, BigCount b, const std::string &context) {
    if (a == 0 || b == 0) return 0;
    BigCount r = a * b;
    if (r / a != b)
        throw BudgetError("cardinality overflow (>2^128) while computing " + context);
    return r;
}

std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace archmap
