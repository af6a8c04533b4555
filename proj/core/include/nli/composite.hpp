#pragma once

#include <span>
#include <vector>

#include "nli/evaluator.hpp"

namespace nli {

/// Softmax assembled from elementary tables: exp of the max-subtracted
/// entries through lut_exp, the sum reduced in double precision, its
/// reciprocal through lut_recip, then an elementwise multiply.
std::vector<double> eval_composite_softmax(const TwoLevelLut& lut_exp,
                                           const TwoLevelLut& lut_recip,
                                           std::span<const double> xs);

/// x_i * rsqrt(mean(x^2) + eps) with the rsqrt kernel through the table;
/// squares and mean in double precision.
std::vector<double> eval_composite_rmsnorm(const TwoLevelLut& lut_rsqrt,
                                           std::span<const double> xs,
                                           double eps = 1e-6);

}  // namespace nli
