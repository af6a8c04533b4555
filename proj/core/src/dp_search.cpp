#include "nli/dp_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nli/errors.hpp"

namespace nli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> decode_all(std::span<const fp16::Code> grid) {
    std::vector<double> xs(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) xs[i] = fp16::decode(grid[i]);
    return xs;
}

std::vector<double> eval_all(std::span<const double> xs, const OperatorSpec& op) {
    std::vector<double> ys(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        ys[i] = eval_exact(op, xs[i]);
        if (!std::isfinite(ys[i])) throw DomainError(op.name + ": non-finite value on grid");
    }
    return ys;
}

}  // namespace

std::vector<double> make_inv_denominators(std::span<const double> yvals, double tau) {
    std::vector<double> inv(yvals.size());
    for (size_t j = 0; j < yvals.size(); ++j) {
        inv[j] = 1.0 / std::max(std::fabs(yvals[j]), tau);
    }
    return inv;
}

double segment_error(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> inv_den, int i, int k, int sample_cap) {
    if (i >= k) throw DomainError("segment_error: requires i < k");
    if (sample_cap < 2) throw DomainError("segment_error: sample_cap must be >= 2");
    const double xi = xs[i], yi = ys[i];
    const double slope = (ys[k] - yi) / (xs[k] - xi);
    const long n = k - i + 1;
    double sum = 0.0;
    if (n <= sample_cap) {
        for (int j = i; j <= k; ++j) {
            const double p = yi + slope * (xs[j] - xi);
            sum += std::fabs(ys[j] - p) * inv_den[j];
        }
        return sum / static_cast<double>(n);
    }
    // deterministic uniform index subsample, both endpoints included
    for (int m = 0; m < sample_cap; ++m) {
        const int j = i + static_cast<int>((static_cast<long>(m) * (n - 1)) / (sample_cap - 1));
        const double p = yi + slope * (xs[j] - xi);
        sum += std::fabs(ys[j] - p) * inv_den[j];
    }
    return sum / static_cast<double>(sample_cap);
}

double segment_error(std::span<const fp16::Code> grid, std::span<const double> yvals,
                     int i, int k, double tau, int sample_cap) {
    const auto xs = decode_all(grid);
    const auto inv = make_inv_denominators(yvals, tau);
    return segment_error(xs, yvals, inv, i, k, sample_cap);
}

double boundary_cost(std::span<const double> ys, std::span<const double> inv_den, int k) {
    const double yk = ys[k];
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += std::fabs(ys[j] - yk) * inv_den[j];
    return sum / static_cast<double>(k + 1);
}

double boundary_cost(std::span<const fp16::Code>, std::span<const double> yvals,
                     int k, double tau) {
    const auto inv = make_inv_denominators(yvals, tau);
    return boundary_cost(yvals, inv, k);
}

double tail_cost(std::span<const double> ys, std::span<const double> inv_den, int k) {
    const int n = static_cast<int>(ys.size());
    if (k == n - 1) return 0.0;
    const double yk = ys[k];
    double sum = 0.0;
    for (int j = k + 1; j < n; ++j) sum += std::fabs(ys[j] - yk) * inv_den[j];
    return sum / static_cast<double>(std::max(1, n - 1 - k));
}

double tail_cost(std::span<const fp16::Code>, std::span<const double> yvals,
                 int k, double tau) {
    const auto inv = make_inv_denominators(yvals, tau);
    return tail_cost(yvals, inv, k);
}

CutpointSet dp_search(std::span<const fp16::Code> grid, const OperatorSpec& op, int M,
                      double tau, int sample_cap, DpTables* tables) {
    const int N = static_cast<int>(grid.size());
    if (M < 2) throw DomainError("dp_search: M must be >= 2");
    if (N < M) throw DomainError("dp_search: grid smaller than cutpoint budget");

    const auto xs = decode_all(grid);
    const auto ys = eval_all(xs, op);
    const auto inv = make_inv_denominators(ys, tau);

    DpTables local;
    DpTables& dp = tables ? *tables : local;
    dp.num_cutpoints = M;
    dp.grid_size = N;
    dp.tau = tau;
    dp.cost.assign(static_cast<size_t>(M) * N, kInf);
    dp.pred.assign(static_cast<size_t>(M) * N, -1);

    for (int k = 0; k < N; ++k) {
        dp.cost_at(0, k) = boundary_cost(ys, inv, k);
        dp.pred_at(0, k) = k;
    }

    std::vector<double> tails(N, 0.0);
    for (int k = 0; k < N; ++k) tails[k] = tail_cost(ys, inv, k);

    for (int L = 1; L < M; ++L) {
        const bool last = (L == M - 1);
        for (int k = L; k < N; ++k) {
            double best = kInf;
            int arg = -1;
            const double tail = last ? tails[k] : 0.0;
            for (int i = L - 1; i < k; ++i) {
                const double prev = dp.cost_at(L - 1, i);
                if (prev >= best) continue;  // Err and tail are nonnegative
                const double val = prev + segment_error(xs, ys, inv, i, k, sample_cap) + tail;
                if (val < best) {
                    best = val;
                    arg = i;
                }
            }
            dp.cost_at(L, k) = best;
            dp.pred_at(L, k) = arg;
        }
    }

    int k_star = M - 1;
    for (int k = M - 1; k < N; ++k) {
        if (dp.cost_at(M - 1, k) < dp.cost_at(M - 1, k_star)) k_star = k;
    }

    std::vector<int> idx(M);
    idx[M - 1] = k_star;
    for (int L = M - 1; L >= 1; --L) idx[L - 1] = dp.pred_at(L, idx[L]);

    CutpointSet cuts;
    cuts.cost = dp.cost_at(M - 1, k_star);
    cuts.points.reserve(M);
    cuts.values.reserve(M);
    for (int L = 0; L < M; ++L) {
        cuts.points.push_back(grid[static_cast<size_t>(idx[L])]);
        cuts.values.push_back(ys[static_cast<size_t>(idx[L])]);
    }
    return cuts;
}

namespace {

std::vector<int> locate_points(const CutpointSet& cuts, std::span<const fp16::Code> grid) {
    std::vector<int> idx;
    idx.reserve(cuts.points.size());
    for (fp16::Code p : cuts.points) {
        auto it = std::lower_bound(grid.begin(), grid.end(), p,
                                   [](fp16::Code lhs, fp16::Code rhs) {
                                       return fp16::rank(lhs) < fp16::rank(rhs);
                                   });
        if (it == grid.end() || *it != p) throw DomainError("cost_of: cutpoint not on grid");
        idx.push_back(static_cast<int>(it - grid.begin()));
    }
    if (!std::is_sorted(idx.begin(), idx.end()) ||
        std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
        throw DomainError("cost_of: cutpoints must be strictly ascending");
    }
    return idx;
}

}  // namespace

double cost_of(const CutpointSet& cuts, std::span<const fp16::Code> grid,
               const OperatorSpec& op, double tau) {
    const auto idx = locate_points(cuts, grid);
    const auto xs = decode_all(grid);
    const auto ys = eval_all(xs, op);
    const auto inv = make_inv_denominators(ys, tau);
    const int uncapped = std::max(2, static_cast<int>(grid.size()));

    double total = boundary_cost(ys, inv, idx.front());
    for (size_t s = 0; s + 1 < idx.size(); ++s) {
        total += segment_error(xs, ys, inv, idx[s], idx[s + 1], uncapped);
    }
    total += tail_cost(ys, inv, idx.back());
    return total;
}

double cost_of_subbinned(const CutpointSet& cuts, std::span<const fp16::Code> grid,
                         const OperatorSpec& op, double tau) {
    const auto idx = locate_points(cuts, grid);
    if (idx.size() != 11u) throw DomainError("cost_of_subbinned: requires 11 cutpoints");
    const auto xs = decode_all(grid);
    const auto ys = eval_all(xs, op);
    const auto inv = make_inv_denominators(ys, tau);

    // Mean relative error of the deployed layout: end intervals one chord,
    // middle intervals 32 uniform value bins.
    double sum = 0.0;
    long count = 0;
    for (int j = 0; j <= idx.front(); ++j) {
        sum += std::fabs(ys[j] - ys[idx.front()]) * inv[j];
        ++count;
    }
    for (size_t I = 0; I + 1 < idx.size(); ++I) {
        const double lo = xs[idx[I]], hi = xs[idx[I + 1]];
        const bool middle = I >= 1 && I <= 8;
        const int bins = middle ? 32 : 1;
        const double w = (hi - lo) / bins;
        for (int j = idx[I] + 1; j <= idx[I + 1]; ++j) {
            const double x = xs[j];
            int b = std::min(bins - 1, static_cast<int>((x - lo) / w));
            const double xa = lo + b * w, xb = (b == bins - 1) ? hi : lo + (b + 1) * w;
            const double ya = eval_exact(op, xa), yb = eval_exact(op, xb);
            const double p = ya + (yb - ya) / (xb - xa) * (x - xa);
            sum += std::fabs(ys[j] - p) * inv[j];
            ++count;
        }
    }
    for (int j = idx.back() + 1; j < static_cast<int>(xs.size()); ++j) {
        sum += std::fabs(ys[j] - ys[idx.back()]) * inv[j];
        ++count;
    }
    return sum / static_cast<double>(count);
}

}  // namespace nli
