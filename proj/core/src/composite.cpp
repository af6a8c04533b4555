#include "nli/composite.hpp"

#include <algorithm>
#include <cmath>

#include "nli/errors.hpp"

namespace nli {

std::vector<double> eval_composite_softmax(const TwoLevelLut& lut_exp,
                                           const TwoLevelLut& lut_recip,
                                           std::span<const double> xs) {
    if (xs.empty()) throw DomainError("softmax: empty input");
    const double m = *std::max_element(xs.begin(), xs.end());
    std::vector<double> e(xs.size());
    double sum = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        // arguments arrive as FP16 activations
        const fp16::Code c = fp16::encode(xs[i] - m);
        e[i] = fp16::decode(eval(lut_exp, c, EvalMode::Reference));
        sum += e[i];
    }
    const double r = fp16::decode(eval(lut_recip, fp16::encode(sum), EvalMode::Reference));
    for (double& v : e) v *= r;
    return e;
}

std::vector<double> eval_composite_rmsnorm(const TwoLevelLut& lut_rsqrt,
                                           std::span<const double> xs, double eps) {
    if (xs.empty()) throw DomainError("rmsnorm: empty input");
    double ms = 0.0;
    for (double x : xs) ms += x * x;
    ms = ms / static_cast<double>(xs.size()) + eps;
    const double r = fp16::decode(eval(lut_rsqrt, fp16::encode(ms), EvalMode::Reference));
    std::vector<double> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = xs[i] * r;
    return out;
}

}  // namespace nli
