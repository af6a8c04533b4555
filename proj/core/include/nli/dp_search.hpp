#pragma once

#include <span>
#include <vector>

#include "nli/fp16.hpp"
#include "nli/operators.hpp"

namespace nli {

inline constexpr double kDefaultTau = 0x1p-14;
inline constexpr int kDefaultSampleCap = 512;

/// Bellman tables of the cutpoint search: cost[L][k] is the minimum
/// objective over the prefix ending with the L-th cutpoint at grid index k,
/// pred[L][k] the predecessor index attaining it.
struct DpTables {
    int num_cutpoints = 0;  // M
    int grid_size = 0;      // N
    double tau = kDefaultTau;
    std::vector<double> cost;  // M*N, +inf where unreachable
    std::vector<int> pred;     // M*N, -1 where unreachable

    double& cost_at(int L, int k) { return cost[static_cast<size_t>(L) * grid_size + k]; }
    double cost_at(int L, int k) const { return cost[static_cast<size_t>(L) * grid_size + k]; }
    int& pred_at(int L, int k) { return pred[static_cast<size_t>(L) * grid_size + k]; }
    int pred_at(int L, int k) const { return pred[static_cast<size_t>(L) * grid_size + k]; }
};

/// An ordered cutpoint selection plus the objective value that produced it.
struct CutpointSet {
    std::vector<fp16::Code> points;  // ascending
    std::vector<double> values;      // exact f at each point
    double cost = 0.0;
};

/// 1 / max(|y_j|, tau) for every grid point; the shared relative-error
/// denominators of all objective terms.
std::vector<double> make_inv_denominators(std::span<const double> yvals, double tau);

/// Mean relative error of the endpoint-anchored chord on [i, k]. Segments
/// longer than sample_cap are evaluated on a deterministic uniform index
/// subsample that always contains both endpoints.
double segment_error(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> inv_den, int i, int k, int sample_cap);

/// Code-level convenience form matching the grid representation.
double segment_error(std::span<const fp16::Code> grid, std::span<const double> yvals,
                     int i, int k, double tau, int sample_cap);

/// Left-clamp term: mean relative error of replacing f on [x_0, x_k] by f(x_k).
double boundary_cost(std::span<const double> ys, std::span<const double> inv_den, int k);
double boundary_cost(std::span<const fp16::Code> grid, std::span<const double> yvals,
                     int k, double tau);

/// Right-clamp term: mean relative error of replacing f on (x_k, x_{N-1}]
/// by f(x_k); zero at the last grid point.
double tail_cost(std::span<const double> ys, std::span<const double> inv_den, int k);
double tail_cost(std::span<const fp16::Code> grid, std::span<const double> yvals,
                 int k, double tau);

/// Globally optimal M-cutpoint search over the grid (Bellman recursion with
/// two-sided clamp terms). Ties break toward the smallest predecessor index
/// and, at the root, the smallest grid index; results are bit-deterministic.
/// Pass `tables` to retain the filled DP tables.
CutpointSet dp_search(std::span<const fp16::Code> grid, const OperatorSpec& op, int M,
                      double tau = kDefaultTau, int sample_cap = kDefaultSampleCap,
                      DpTables* tables = nullptr);

/// Exact objective (no sample cap) of an arbitrary cutpoint set on the grid.
/// Throws DomainError if a point is not a grid code.
double cost_of(const CutpointSet& cuts, std::span<const fp16::Code> grid,
               const OperatorSpec& op, double tau = kDefaultTau);

/// Experimental variant of the objective that charges each middle macro
/// interval with its 32-uniform-bin subdivision error instead of one chord.
/// Not part of the search; provided for layout experiments only.
double cost_of_subbinned(const CutpointSet& cuts, std::span<const fp16::Code> grid,
                         const OperatorSpec& op, double tau = kDefaultTau);

}  // namespace nli
