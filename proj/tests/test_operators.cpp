#include <doctest.h>

#include <cmath>
#include <random>

#include "nli/errors.hpp"
#include "nli/operators.hpp"

using namespace nli;

namespace {

// Independent long-double formulations used only as test oracles.
long double ref_value(const std::string& name, long double x) {
    if (name == "exp") return expl(x);
    if (name == "sigmoid") return 1.0L / (1.0L + expl(-x));
    if (name == "tanh") return tanhl(x);
    if (name == "silu") return x / (1.0L + expl(-x));
    if (name == "gelu") return 0.5L * x * erfcl(-x / sqrtl(2.0L));
    if (name == "rsqrt") return 1.0L / sqrtl(x);
    if (name == "reciprocal") return 1.0L / x;
    if (name == "hardswish") {
        if (x <= -3.0L) return 0.0L;
        if (x >= 3.0L) return x;
        return x * (x + 3.0L) / 6.0L;
    }
    if (name == "mish") return x * tanhl(log1pl(expl(x)));
    if (name == "identity") return x;
    FAIL("no reference for operator ", name);
    return 0.0L;
}

double ulps_apart(double a, double b) {
    if (a == b) return 0.0;
    const double scale = std::ldexp(1.0, std::ilogb(std::max(std::fabs(a), std::fabs(b))) - 52);
    return std::fabs(a - b) / scale;
}

}  // namespace

TEST_CASE("registry lookups") {
    CHECK(get_operator("exp").range_lo == -17.34375);
    CHECK(get_operator("exp").range_hi == 11.0859375);
    CHECK(get_operator("silu").range_lo == -20.359375);
    CHECK(get_operator("silu").range_hi == 65504.0);
    CHECK_FALSE(get_operator("reciprocal").domain(0.0));
    CHECK(get_operator("reciprocal").domain(0.25));
    CHECK_FALSE(get_operator("rsqrt").domain(-1.0));
    CHECK_FALSE(get_operator("hardswish").smooth);
    CHECK_THROWS_AS(get_operator("arctan"), UnknownOperatorError);
    const auto names = operator_names();
    for (const char* n : {"exp", "gelu", "silu", "rsqrt", "reciprocal", "hardswish", "mish",
                          "sigmoid", "tanh"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
}

TEST_CASE("exact spot values") {
    CHECK(eval_exact(get_operator("silu"), 0.0) == 0.0);
    CHECK(eval_exact(get_operator("exp"), 0.0) == 1.0);
    CHECK(eval_exact(get_operator("rsqrt"), 4.0) == 0.5);
    CHECK(eval_exact(get_operator("reciprocal"), 8.0) == 0.125);
    CHECK(eval_exact(get_operator("tanh"), 0.0) == 0.0);
    CHECK(eval_exact(get_operator("hardswish"), -3.0) == 0.0);
    CHECK(eval_exact(get_operator("hardswish"), 4.0) == 4.0);
    CHECK_THROWS_AS(eval_exact(get_operator("reciprocal"), 0.0), DomainError);
}

TEST_CASE("eval_exact within a few ulps of an independent reference") {
    std::mt19937 rng(2024);
    for (const auto& name : operator_names()) {
        const auto& op = get_operator(name);
        // libm's double erfc drifts by tens of ulps deep in the tail; the
        // other kernels stay within 4.
        const double budget = (name == "gelu" || name == "mish") ? 64.0 : 4.0;
        const double lo = std::max(op.range_lo, -30.0);
        const double hi = std::min(op.range_hi, 30.0);
        std::uniform_real_distribution<double> dist(lo, hi);
        int tested = 0;
        while (tested < 100000) {
            const double x = dist(rng);
            if (!op.domain(x)) continue;
            ++tested;
            const double got = eval_exact(op, x);
            const auto want = static_cast<double>(ref_value(name, x));
            INFO(name, " at x=", x);
            CHECK(ulps_apart(got, want) <= budget);
        }
    }
}
