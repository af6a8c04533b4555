#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nli/fp16.hpp"

namespace nli {

/// A named scalar function with a double-precision reference evaluator,
/// a legal-domain predicate and the default FP16 grid range.
struct OperatorSpec {
    std::string name;
    std::function<double(double)> exact;
    std::function<bool(double)> domain;
    double range_lo = 0.0;
    double range_hi = 0.0;
    bool smooth = true;  // twice differentiable on the default range
};

/// Registered operators: exp, gelu, silu, rsqrt, reciprocal, hardswish,
/// mish, sigmoid, tanh (CLI-visible), plus identity for testing.
const OperatorSpec& get_operator(std::string_view name);
std::vector<std::string> operator_names();

/// Reference value; throws DomainError outside op.domain.
double eval_exact(const OperatorSpec& op, double x);

/// A slice of the finite FP16 grid.
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int stride = 1;  // take every stride-th code; the last code is always kept
};

/// All finite FP16 codes in [lo, hi] inside op's legal domain whose exact
/// value is finite, ascending, decimated by stride (endpoints preserved).
/// Only +0 represents zero. Throws DomainError if nothing survives.
std::vector<fp16::Code> enumerate_grid(const GridSpec& spec, const OperatorSpec& op);

/// enumerate_grid with extra codes forced into the result (kept sorted,
/// deduplicated); anchors outside [lo, hi] or the legal domain are rejected.
std::vector<fp16::Code> enumerate_grid_with_anchors(const GridSpec& spec,
                                                    const OperatorSpec& op,
                                                    const std::vector<fp16::Code>& anchors);

}  // namespace nli
