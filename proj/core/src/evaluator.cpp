#include "nli/evaluator.hpp"

#include <algorithm>
#include <cmath>

#include "nli/errors.hpp"

namespace nli {

namespace {

int select_interval(const TwoLevelLut& lut, double x) {
    // 10-way comparison chain over the inner endpoints; half-open
    // [P[I], P[I+1]) per interval.
    for (int i = 1; i < kNumEndpoints - 1; ++i) {
        if (x < lut.endpoint_vals[static_cast<size_t>(i)]) return i - 1;
    }
    return kMacroIntervals - 1;
}

int interval_of_global(int g) {
    if (g == 0) return 0;
    if (g >= 257) return 9;
    return 1 + (g - 1) / kBinsMiddle;
}

double round16(double v) { return fp16::decode(fp16::encode(v)); }

}  // namespace

AddressDecomposition locate(const TwoLevelLut& lut, fp16::Code x) {
    if (fp16::is_nan(x)) throw DomainError("locate: NaN input");
    const double xv = fp16::decode(x);
    AddressDecomposition ad;
    if (xv <= lut.endpoint_vals[0]) return ad;  // all zeros
    if (xv >= lut.endpoint_vals[kNumEndpoints - 1]) {
        ad.index = kMacroIntervals - 1;
        ad.address = 0;
        ad.decimal = 1.0;
        ad.global = kLutEntries - 2;
        return ad;
    }
    ad.index = select_interval(lut, xv);
    const double u = (xv - lut.endpoint_vals[static_cast<size_t>(ad.index)]) *
                     lut.scale_vals[static_cast<size_t>(ad.index)];
    ad.address = std::min(static_cast<int>(std::floor(u)), TwoLevelLut::bins(ad.index) - 1);
    ad.decimal = std::min(u - ad.address, 1.0);
    ad.global = TwoLevelLut::base_index(ad.index) + ad.address;
    return ad;
}

EvalSteps eval_steps(const TwoLevelLut& lut, fp16::Code x, EvalMode mode) {
    if (fp16::is_nan(x)) throw DomainError("eval: NaN input");
    const bool hw = (mode == EvalMode::Fp16Steps);
    EvalSteps s;
    const double xv = fp16::decode(x);

    if (xv <= lut.endpoint_vals[0]) {
        s.saturated_lo = true;
        s.y = s.y0 = s.y1 = lut.value_vals[0];
        s.result = lut.values[0];
        return s;
    }
    if (xv >= lut.endpoint_vals[kNumEndpoints - 1]) {
        s.saturated_hi = true;
        s.index = kMacroIntervals - 1;
        s.global = kLutEntries - 1;
        s.y = s.y0 = s.y1 = lut.value_vals[kLutEntries - 1];
        s.result = lut.values[kLutEntries - 1];
        return s;
    }

    s.index = select_interval(lut, xv);
    s.dx = xv - lut.endpoint_vals[static_cast<size_t>(s.index)];
    if (hw) s.dx = round16(s.dx);
    s.u = s.dx * lut.scale_vals[static_cast<size_t>(s.index)];
    if (hw) s.u = round16(s.u);
    s.address = std::min(static_cast<int>(std::floor(s.u)), TwoLevelLut::bins(s.index) - 1);
    s.global = TwoLevelLut::base_index(s.index) + s.address;
    s.t = std::min(s.u - s.address, 1.0);
    if (hw) s.t = round16(s.t);
    s.y0 = lut.value_vals[static_cast<size_t>(s.global)];
    s.y1 = lut.value_vals[static_cast<size_t>(s.global) + 1];
    s.dy = s.y1 - s.y0;
    if (hw) s.dy = round16(s.dy);
    s.prod = s.t * s.dy;
    if (hw) s.prod = round16(s.prod);
    s.y = s.y0 + s.prod;
    s.result = fp16::encode(s.y);
    if (hw) s.y = fp16::decode(s.result);
    return s;
}

fp16::Code eval(const TwoLevelLut& lut, fp16::Code x, EvalMode mode) {
    return eval_steps(lut, x, mode).result;
}

std::vector<fp16::Code> eval_batch(const TwoLevelLut& lut,
                                   std::span<const fp16::Code> xs, EvalMode mode) {
    std::vector<fp16::Code> out;
    out.reserve(xs.size());
    for (fp16::Code x : xs) out.push_back(eval(lut, x, mode));
    return out;
}

fp16::Code naive_eval(const TwoLevelLut& lut, fp16::Code x) {
    if (fp16::is_nan(x)) throw DomainError("eval: NaN input");
    const double xv = fp16::decode(x);
    if (xv <= lut.endpoint_vals[0]) return lut.values[0];
    if (xv >= lut.endpoint_vals[kNumEndpoints - 1]) return lut.values[kLutEntries - 1];

    // One comparison per realized boundary, highest bin wins.
    const std::int32_t xr = fp16::rank(x);
    int g = 0;
    for (int b = kLutEntries - 2; b >= 0; --b) {
        if (xr >= fp16::rank(lut.fine_boundaries[static_cast<size_t>(b)])) {
            g = b;
            break;
        }
    }

    const int I = interval_of_global(g);
    const int a = g - TwoLevelLut::base_index(I);
    const double dx = xv - lut.endpoint_vals[static_cast<size_t>(I)];
    const double u = dx * lut.scale_vals[static_cast<size_t>(I)];
    const double t = std::min(u - a, 1.0);
    const double y0 = lut.value_vals[static_cast<size_t>(g)];
    const double y1 = lut.value_vals[static_cast<size_t>(g) + 1];
    const double dy = y1 - y0;
    const double prod = t * dy;
    return fp16::encode(y0 + prod);
}

}  // namespace nli
