#include <doctest.h>

#include <cmath>
#include <random>

#include "nli/errors.hpp"
#include "nli/evaluator.hpp"

using namespace nli;

namespace {

TwoLevelLut appendix_lut(const std::string& name) {
    return build_lut(load_appendix_cutpoints(name), get_operator(name));
}

}  // namespace

TEST_CASE("locate at interval edges") {
    const auto lut = appendix_lut("sigmoid");
    SUBCASE("left edge of interval 3") {
        const auto ad = locate(lut, lut.endpoints[3]);
        CHECK(ad.index == 3);
        CHECK(ad.address == 0);
        CHECK(ad.decimal == 0.0);
        CHECK(ad.global == TwoLevelLut::base_index(3));
    }
    SUBCASE("below the domain saturates to the first entry") {
        const auto ad = locate(lut, fp16::encode(-30.0));
        CHECK(ad.index == 0);
        CHECK(ad.address == 0);
        CHECK(ad.global == 0);
    }
    SUBCASE("top endpoint maps into interval 9") {
        const auto ad = locate(lut, lut.endpoints[10]);
        CHECK(ad.index == 9);
        CHECK(ad.global == 257);
    }
    SUBCASE("global index formula") {
        std::mt19937 rng(5);
        for (int i = 0; i < 5000; ++i) {
            const auto c = fp16::from_rank(static_cast<std::int32_t>(rng() % 63487) - 31743);
            const auto ad = locate(lut, c);
            CHECK(ad.index >= 0);
            CHECK(ad.index <= 9);
            const int expect = ad.index == 0 ? ad.address
                                             : 1 + (ad.index - 1) * 32 + ad.address;
            CHECK(ad.global == expect);
            CHECK(ad.global + 1 <= 258);
            if (ad.index == 0 || ad.index == 9) CHECK(ad.address == 0);
            CHECK(ad.decimal >= 0.0);
            CHECK(ad.decimal <= 1.0);
        }
    }
    SUBCASE("NaN input rejected") {
        CHECK_THROWS_AS(locate(lut, static_cast<fp16::Code>(0x7FFF)), DomainError);
    }
}

TEST_CASE("saturation returns the boundary table entries exactly") {
    const auto lut = appendix_lut("exp");
    CHECK(eval(lut, fp16::encode(12.0), EvalMode::Reference) == lut.values[258]);
    CHECK(eval(lut, fp16::encode(65504.0), EvalMode::Fp16Steps) == lut.values[258]);
    CHECK(eval(lut, fp16::encode(-20.0), EvalMode::Reference) == lut.values[0]);
    CHECK(eval(lut, fp16::encode(-65504.0), EvalMode::Fp16Steps) == lut.values[0]);
    // +inf / -inf codes decode to infinities and saturate the same way
    CHECK(eval(lut, static_cast<fp16::Code>(0x7C00), EvalMode::Reference) == lut.values[258]);
    CHECK(eval(lut, static_cast<fp16::Code>(0xFC00), EvalMode::Reference) == lut.values[0]);
}

TEST_CASE("eval equals the comparator-scan oracle on every finite code") {
    for (const auto& name : appendix_operator_names()) {
        const auto lut = appendix_lut(name);
        long mismatches = 0;
        for (std::int32_t r = fp16::rank(fp16::kMinFinite); r <= fp16::rank(fp16::kMaxFinite);
             ++r) {
            const fp16::Code c = fp16::from_rank(r);
            if (eval(lut, c, EvalMode::Reference) != naive_eval(lut, c)) ++mismatches;
        }
        INFO("operator ", name);
        CHECK(mismatches == 0);
    }
}

TEST_CASE("eval_batch matches a sequential loop") {
    const auto lut = appendix_lut("tanh");
    CHECK(eval_batch(lut, {}, EvalMode::Reference).empty());

    std::mt19937 rng(17);
    std::vector<fp16::Code> xs;
    for (int i = 0; i < 100000; ++i)
        xs.push_back(fp16::from_rank(static_cast<std::int32_t>(rng() % 63487) - 31743));
    for (const EvalMode mode : {EvalMode::Reference, EvalMode::Fp16Steps}) {
        const auto batch = eval_batch(lut, xs, mode);
        REQUIRE(batch.size() == xs.size());
        for (size_t i = 0; i < xs.size(); ++i) CHECK(batch[i] == eval(lut, xs[i], mode));
    }
}

TEST_CASE("reference eval is monotone within a bin") {
    const auto lut = appendix_lut("sigmoid");
    std::mt19937 rng(23);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto c = fp16::from_rank(static_cast<std::int32_t>(rng() % 63487) - 31743);
        const auto cn = fp16::next_up(c);
        const auto a = locate(lut, c);
        const auto b = locate(lut, cn);
        if (a.global != b.global) continue;  // crossed a bin edge
        const double y0 = lut.value_vals[static_cast<size_t>(a.global)];
        const double y1 = lut.value_vals[static_cast<size_t>(a.global) + 1];
        const double va = fp16::decode(eval(lut, c, EvalMode::Reference));
        const double vb = fp16::decode(eval(lut, cn, EvalMode::Reference));
        if (y1 >= y0)
            CHECK(va <= vb);
        else
            CHECK(va >= vb);
    }
}

TEST_CASE("fp16-step mode stays near reference mode on bounded operators") {
    // One bound-check per input, rounding budget per the two-rounding
    // datapath model; exercised on sigmoid/tanh where addressing noise
    // cannot leak across steep bins.
    const double budget = (0x1p-11 / (1 - 0x1p-11)) + (2 * 0x1p-11 / (1 - 2 * 0x1p-11));
    for (const char* name : {"sigmoid", "tanh"}) {
        const auto lut = appendix_lut(name);
        std::mt19937 rng(31);
        for (int i = 0; i < 20000; ++i) {
            const auto c = fp16::from_rank(static_cast<std::int32_t>(rng() % 63487) - 31743);
            const auto s = eval_steps(lut, c, EvalMode::Fp16Steps);
            const double ref = fp16::decode(eval(lut, c, EvalMode::Reference));
            const double tol =
                budget * (std::fabs(s.y0) + std::fabs(s.y1)) + 0x1p-11 * std::fabs(ref) + 0x1p-24;
            CHECK(std::fabs(s.y - ref) <= std::max(tol, 6e-4));
        }
    }
}

TEST_CASE("eval_steps exposes the dataflow equations") {
    const auto lut = appendix_lut("gelu");
    std::mt19937 rng(37);
    for (int i = 0; i < 5000; ++i) {
        const auto c = fp16::from_rank(static_cast<std::int32_t>(rng() % 63487) - 31743);
        const auto s = eval_steps(lut, c, EvalMode::Reference);
        if (s.saturated_lo || s.saturated_hi) continue;
        CHECK(s.u == s.dx * lut.scale_vals[static_cast<size_t>(s.index)]);
        CHECK(s.address == std::min(static_cast<int>(std::floor(s.u)),
                                    TwoLevelLut::bins(s.index) - 1));
        CHECK(s.global == TwoLevelLut::base_index(s.index) + s.address);
        CHECK(s.t == std::min(s.u - s.address, 1.0));
        CHECK(s.y == s.y0 + s.t * (s.y1 - s.y0));
        CHECK(s.result == fp16::encode(s.y));
    }
}
