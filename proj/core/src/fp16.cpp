#include "nli/fp16.hpp"

#include <cmath>

#include "nli/errors.hpp"

namespace nli::fp16 {

bool is_nan(Code c) {
    return (c & 0x7C00) == 0x7C00 && (c & 0x03FF) != 0;
}

bool is_finite(Code c) {
    return (c & 0x7C00) != 0x7C00;
}

double decode(Code c) {
    const int sign = (c & 0x8000) ? -1 : 1;
    const int exp_field = (c >> 10) & 0x1F;
    const int mant = c & 0x03FF;
    if (exp_field == 0x1F) {
        if (mant != 0) return std::numeric_limits<double>::quiet_NaN();
        return sign * std::numeric_limits<double>::infinity();
    }
    if (exp_field == 0) {
        return sign * std::ldexp(static_cast<double>(mant), -24);
    }
    return sign * std::ldexp(static_cast<double>(1024 + mant), exp_field - 25);
}

Code encode(double x) {
    if (std::isnan(x)) throw DomainError("encode: NaN is not representable");
    const Code sign = std::signbit(x) ? 0x8000 : 0;
    double a = std::fabs(x);
    if (a > kMaxValue) a = kMaxValue;  // finite overflow and +-inf saturate
    if (a < kSmallestNormal) {
        // subnormal (or zero): round mant = a * 2^24 to nearest even
        const double q = std::ldexp(a, 24);
        auto m = static_cast<std::int32_t>(std::nearbyint(q));
        return static_cast<Code>(sign | static_cast<Code>(m));  // m == 1024 -> 0x0400, correct
    }
    int e = std::ilogb(a);  // unbiased exponent, in [-14, 15]
    double m = std::ldexp(a, 10 - e);  // in [1024, 2048)
    auto r = static_cast<std::int32_t>(std::nearbyint(m));
    if (r == 2048) {
        r = 1024;
        ++e;
    }
    if (e > 15) return static_cast<Code>(sign | kMaxFinite);
    return static_cast<Code>(sign | static_cast<Code>((e + 15) << 10) |
                             static_cast<Code>(r - 1024));
}

std::int32_t rank(Code c) {
    const std::int32_t mag = c & 0x7FFF;
    return (c & 0x8000) ? -mag : mag;
}

Code from_rank(std::int32_t r) {
    return r >= 0 ? static_cast<Code>(r) : static_cast<Code>(0x8000 | static_cast<Code>(-r));
}

namespace {
const std::int32_t kMaxRank = rank(kMaxFinite);
}

Code next_up(Code c) {
    if (!is_finite(c)) throw DomainError("next_up: non-finite code");
    const std::int32_t r = rank(c);
    return r >= kMaxRank ? kMaxFinite : from_rank(r + 1);
}

Code next_down(Code c) {
    if (!is_finite(c)) throw DomainError("next_down: non-finite code");
    const std::int32_t r = rank(c);
    return r <= -kMaxRank ? kMinFinite : from_rank(r - 1);
}

}  // namespace nli::fp16
