#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nli/evaluator.hpp"

namespace nli {

/// Aggregate error statistics of one approximation sweep.
struct ErrorReport {
    std::string operator_name;
    std::string baseline_tag;  // "nli", "uniform-259", "curvature-259", "macro-only-11"
    EvalMode mode = EvalMode::Reference;
    std::string grid_desc;
    std::size_t count = 0;
    double max_abs = 0.0, mean_abs = 0.0;
    double max_rel = 0.0, mean_rel = 0.0;  // relative with tau floor
    fp16::Code argmax_abs_x = 0;
    fp16::Code argmax_rel_x = 0;
    double argmax_abs_err = 0.0, argmax_rel_err = 0.0;
};

/// Evaluate the table at every grid code, compare against the
/// double-precision reference, aggregate (compensated sums; deterministic).
ErrorReport sweep(const TwoLevelLut& lut, const OperatorSpec& op,
                  std::span<const fp16::Code> grid, EvalMode mode,
                  double tau = kDefaultTau);

/// Optional per-point dump row: input code, exact, approx, abs, rel.
std::string sweep_points_csv(const TwoLevelLut& lut, const OperatorSpec& op,
                             std::span<const fp16::Code> grid, EvalMode mode,
                             double tau = kDefaultTau);

/// A flat interpolation table with arbitrary node abscissae: the baseline
/// layouts share the chord semantics but locate by value scan and use a
/// division for the fraction.
struct FineTable {
    std::string operator_name;
    std::string tag;
    std::vector<double> nodes;          // strictly ascending
    std::vector<fp16::Code> values;     // FP16-rounded f at each node
};

fp16::Code fine_eval(const FineTable& table, fp16::Code x);

ErrorReport sweep_fine(const FineTable& table, const OperatorSpec& op,
                       std::span<const fp16::Code> grid, double tau = kDefaultTau);

/// 259 nodes uniformly spaced in value over the default range.
FineTable baseline_uniform(const OperatorSpec& op, int total = kLutEntries);

/// 259 nodes with density proportional to |f''|^(1/2) (central differences,
/// inverse-CDF sampling); endpoints included, deterministic.
FineTable baseline_curvature(const OperatorSpec& op, int total = kLutEntries);

/// The 11 DP-optimal macro endpoints used directly as the table.
FineTable baseline_macro_only(const OperatorSpec& op, std::span<const fp16::Code> grid,
                              int M = kNumEndpoints, double tau = kDefaultTau,
                              int sample_cap = kDefaultSampleCap);

/// Precision parameters of the unified interpolation bound.
struct BoundParams {
    double u_c = fp16::kUnitRoundoff;  // coefficient/storage precision
    double u_a = fp16::kUnitRoundoff;  // arithmetic precision
    int fpp_samples = 257;             // dense central-difference samples
};

/// Unified per-segment bound: (b-a)^2/8 * max|f''| + (gamma1(u_c) +
/// gamma2(u_a)) * (|y_a| + |y_b|). Empty for non-smooth operators.
std::optional<double> segment_bound(const OperatorSpec& op, double a, double b,
                                    const BoundParams& params, double y_a, double y_b);

/// gamma_k(u) = k*u / (1 - k*u)
double gamma_factor(int k, double u);

/// Ranked CSV (ascending mean relative error); reports must share the grid.
std::string compare_csv(std::span<const ErrorReport> reports);

}  // namespace nli
