#include "nli/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nli/errors.hpp"

namespace nli {

namespace {

double silu(double x) { return x / (1.0 + std::exp(-x)); }

// erfc form avoids the 1 + erf cancellation in the deep negative tail
double gelu(double x) { return 0.5 * x * std::erfc(-x / std::sqrt(2.0)); }

double softplus(double x) {
    if (x > 0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double mish(double x) { return x * std::tanh(softplus(x)); }

double hardswish(double x) { return x * std::clamp(x + 3.0, 0.0, 6.0) / 6.0; }

bool any_real(double) { return true; }

std::map<std::string, OperatorSpec, std::less<>> make_registry() {
    std::map<std::string, OperatorSpec, std::less<>> reg;
    auto add = [&reg](std::string name, std::function<double(double)> f,
                      std::function<bool(double)> dom, double lo, double hi,
                      bool smooth = true) {
        reg.emplace(name, OperatorSpec{name, std::move(f), std::move(dom), lo, hi, smooth});
    };
    // Default ranges follow the shipped cutpoint tables.
    add("exp", [](double x) { return std::exp(x); }, any_real, -17.34375, 11.0859375);
    add("gelu", gelu, any_real, -5.5390625, 65504.0);
    add("silu", silu, any_real, -20.359375, 65504.0);
    add("rsqrt", [](double x) { return 1.0 / std::sqrt(x); },
        [](double x) { return x > 0.0; }, 5.9604644775390625e-08, 65504.0);
    add("reciprocal", [](double x) { return 1.0 / x; },
        [](double x) { return x != 0.0; }, 1.531839370727539e-05, 65504.0);
    add("hardswish", hardswish, any_real, -3.0, 65504.0, /*smooth=*/false);
    add("mish", mish, any_real, -20.34375, 65504.0);
    add("sigmoid", [](double x) { return 1.0 / (1.0 + std::exp(-x)); }, any_real,
        -17.34375, 8.3203125);
    add("tanh", [](double x) { return std::tanh(x); }, any_real, -4.5078125, 4.5078125);
    add("identity", [](double x) { return x; }, any_real, -65504.0, 65504.0);
    return reg;
}

const std::map<std::string, OperatorSpec, std::less<>>& registry() {
    static const auto reg = make_registry();
    return reg;
}

}  // namespace

const OperatorSpec& get_operator(std::string_view name) {
    const auto& reg = registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw UnknownOperatorError(std::string(name));
    return it->second;
}

std::vector<std::string> operator_names() {
    std::vector<std::string> names;
    for (const auto& [name, spec] : registry()) names.push_back(name);
    return names;
}

double eval_exact(const OperatorSpec& op, double x) {
    if (!op.domain(x)) throw DomainError(op.name + ": argument outside legal domain");
    return op.exact(x);
}

std::vector<fp16::Code> enumerate_grid(const GridSpec& spec, const OperatorSpec& op) {
    return enumerate_grid_with_anchors(spec, op, {});
}

std::vector<fp16::Code> enumerate_grid_with_anchors(const GridSpec& spec,
                                                    const OperatorSpec& op,
                                                    const std::vector<fp16::Code>& anchors) {
    if (spec.stride < 1) throw DomainError("enumerate_grid: stride must be positive");
    const fp16::Code lo_c = fp16::encode(spec.lo);
    const fp16::Code hi_c = fp16::encode(spec.hi);
    const std::int32_t lo_r = fp16::rank(lo_c);
    const std::int32_t hi_r = fp16::rank(hi_c);
    if (lo_r > hi_r) throw DomainError("enumerate_grid: lo > hi");

    std::vector<fp16::Code> full;
    full.reserve(static_cast<size_t>(hi_r - lo_r) + 1);
    for (std::int32_t r = lo_r; r <= hi_r; ++r) {
        const fp16::Code c = fp16::from_rank(r);
        const double x = fp16::decode(c);
        if (!op.domain(x)) continue;
        if (!std::isfinite(op.exact(x))) continue;
        full.push_back(c);
    }
    if (full.empty()) throw DomainError("enumerate_grid: no grid point survives filtering");

    std::vector<fp16::Code> out;
    out.reserve(full.size() / spec.stride + 2);
    for (size_t i = 0; i < full.size(); i += static_cast<size_t>(spec.stride)) {
        out.push_back(full[i]);
    }
    if (out.back() != full.back()) out.push_back(full.back());

    for (fp16::Code a : anchors) {
        if (std::find(full.begin(), full.end(), a) == full.end()) {
            throw DomainError("enumerate_grid: anchor code outside the grid range");
        }
        auto pos = std::lower_bound(out.begin(), out.end(), a,
                                    [](fp16::Code lhs, fp16::Code rhs) {
                                        return fp16::rank(lhs) < fp16::rank(rhs);
                                    });
        if (pos == out.end() || *pos != a) out.insert(pos, a);
    }
    return out;
}

}  // namespace nli
