#include "nli/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "nli/errors.hpp"

namespace nli {

namespace {

struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

template <typename Approx>
ErrorReport sweep_impl(const OperatorSpec& op, std::span<const fp16::Code> grid,
                       double tau, Approx&& approx_of) {
    ErrorReport rep;
    rep.operator_name = op.name;
    rep.count = grid.size();
    KahanSum abs_sum, rel_sum;
    for (fp16::Code c : grid) {
        const double x = fp16::decode(c);
        const double exact = eval_exact(op, x);
        const double approx = approx_of(c);
        const double abs = std::fabs(approx - exact);
        const double rel = abs / std::max(std::fabs(exact), tau);
        abs_sum.add(abs);
        rel_sum.add(rel);
        if (abs > rep.max_abs) {
            rep.max_abs = abs;
            rep.argmax_abs_x = c;
            rep.argmax_abs_err = abs;
        }
        if (rel > rep.max_rel) {
            rep.max_rel = rel;
            rep.argmax_rel_x = c;
            rep.argmax_rel_err = rel;
        }
    }
    if (!grid.empty()) {
        rep.mean_abs = abs_sum.sum / static_cast<double>(grid.size());
        rep.mean_rel = rel_sum.sum / static_cast<double>(grid.size());
    }
    return rep;
}

double fpp_central(const OperatorSpec& op, double x) {
    double h = std::max(1e-4 * std::fabs(x), 1e-4);
    for (int tries = 0; tries < 80; ++tries) {
        if (op.domain(x - h) && op.domain(x + h)) {
            const double fm = op.exact(x - h), f0 = op.exact(x), fp = op.exact(x + h);
            const double num = fp - 2.0 * f0 + fm;
            // cancellation floor: second differences below the evaluation
            // roundoff are indistinguishable from zero curvature
            const double noise =
                8.0 * std::numeric_limits<double>::epsilon() *
                (std::fabs(fp) + 2.0 * std::fabs(f0) + std::fabs(fm));
            if (std::fabs(num) <= noise) return 0.0;
            return num / (h * h);
        }
        h *= 0.5;
    }
    return 0.0;  // no symmetric neighbourhood inside the domain
}

}  // namespace

ErrorReport sweep(const TwoLevelLut& lut, const OperatorSpec& op,
                  std::span<const fp16::Code> grid, EvalMode mode, double tau) {
    ErrorReport rep = sweep_impl(op, grid, tau, [&](fp16::Code c) {
        return fp16::decode(eval(lut, c, mode));
    });
    rep.baseline_tag = "nli";
    rep.mode = mode;
    return rep;
}

std::string sweep_points_csv(const TwoLevelLut& lut, const OperatorSpec& op,
                             std::span<const fp16::Code> grid, EvalMode mode, double tau) {
    std::ostringstream os;
    os << "x_hex,x,exact,approx,abs_err,rel_err\n";
    char buf[160];
    for (fp16::Code c : grid) {
        const double x = fp16::decode(c);
        const double exact = eval_exact(op, x);
        const double approx = fp16::decode(eval(lut, c, mode));
        const double abs = std::fabs(approx - exact);
        const double rel = abs / std::max(std::fabs(exact), tau);
        std::snprintf(buf, sizeof buf, "0x%04x,%.17g,%.17g,%.17g,%.17g,%.17g\n", c, x, exact,
                      approx, abs, rel);
        os << buf;
    }
    return os.str();
}

fp16::Code fine_eval(const FineTable& table, fp16::Code x) {
    if (fp16::is_nan(x)) throw DomainError("fine_eval: NaN input");
    if (table.nodes.size() < 2 || table.nodes.size() != table.values.size())
        throw DomainError("fine_eval: malformed table");
    const double xv = fp16::decode(x);
    if (xv <= table.nodes.front()) return table.values.front();
    if (xv >= table.nodes.back()) return table.values.back();
    const auto it = std::upper_bound(table.nodes.begin(), table.nodes.end(), xv);
    const size_t s = static_cast<size_t>(it - table.nodes.begin()) - 1;
    const double x0 = table.nodes[s], x1 = table.nodes[s + 1];
    const double y0 = fp16::decode(table.values[s]);
    const double y1 = fp16::decode(table.values[s + 1]);
    const double t = (xv - x0) / (x1 - x0);
    return fp16::encode(y0 + t * (y1 - y0));
}

ErrorReport sweep_fine(const FineTable& table, const OperatorSpec& op,
                       std::span<const fp16::Code> grid, double tau) {
    ErrorReport rep = sweep_impl(op, grid, tau, [&](fp16::Code c) {
        return fp16::decode(fine_eval(table, c));
    });
    rep.baseline_tag = table.tag;
    rep.mode = EvalMode::Reference;
    return rep;
}

namespace {

FineTable table_from_nodes(const OperatorSpec& op, std::string tag, std::vector<double> nodes) {
    FineTable t;
    t.operator_name = op.name;
    t.tag = std::move(tag);
    t.values.reserve(nodes.size());
    for (double x : nodes) t.values.push_back(fp16::encode(eval_exact(op, x)));
    t.nodes = std::move(nodes);
    return t;
}

}  // namespace

FineTable baseline_uniform(const OperatorSpec& op, int total) {
    if (total < 2) throw DomainError("baseline_uniform: need at least 2 nodes");
    std::vector<double> nodes(static_cast<size_t>(total));
    const double lo = op.range_lo, hi = op.range_hi;
    for (int i = 0; i < total; ++i)
        nodes[static_cast<size_t>(i)] = lo + (hi - lo) * (static_cast<double>(i) / (total - 1));
    nodes.back() = hi;
    return table_from_nodes(op, "uniform-" + std::to_string(total), std::move(nodes));
}

FineTable baseline_curvature(const OperatorSpec& op, int total) {
    if (total < 2) throw DomainError("baseline_curvature: need at least 2 nodes");
    const double lo = op.range_lo, hi = op.range_hi;
    constexpr int kDense = 8192;
    std::vector<double> xs(kDense + 1), w(kDense + 1);
    for (int i = 0; i <= kDense; ++i) {
        xs[static_cast<size_t>(i)] = lo + (hi - lo) * (static_cast<double>(i) / kDense);
        const double fpp = fpp_central(op, xs[static_cast<size_t>(i)]);
        w[static_cast<size_t>(i)] = std::isfinite(fpp) ? std::sqrt(std::fabs(fpp)) : 0.0;
    }
    // cumulative trapezoid of the density; a tiny uniform floor keeps the
    // CDF strictly increasing on flat stretches
    std::vector<double> cdf(kDense + 1, 0.0);
    const double floor_w = 1e-12;
    for (int i = 1; i <= kDense; ++i) {
        const double dx = xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(i) - 1];
        const double avg = 0.5 * (w[static_cast<size_t>(i)] + w[static_cast<size_t>(i) - 1]) + floor_w;
        cdf[static_cast<size_t>(i)] = cdf[static_cast<size_t>(i) - 1] + avg * dx;
    }
    const double W = cdf.back();

    std::vector<double> nodes(static_cast<size_t>(total));
    nodes.front() = lo;
    nodes.back() = hi;
    size_t seg = 0;
    for (int j = 1; j < total - 1; ++j) {
        const double q = W * (static_cast<double>(j) / (total - 1));
        while (seg + 1 < cdf.size() && cdf[seg + 1] < q) ++seg;
        const double c0 = cdf[seg], c1 = cdf[seg + 1];
        const double frac = (c1 > c0) ? (q - c0) / (c1 - c0) : 0.0;
        double x = xs[seg] + frac * (xs[seg + 1] - xs[seg]);
        if (x <= nodes[static_cast<size_t>(j) - 1])
            x = std::nextafter(nodes[static_cast<size_t>(j) - 1], hi);
        nodes[static_cast<size_t>(j)] = x;
    }
    if (nodes[static_cast<size_t>(total) - 2] >= hi)
        throw DomainError("baseline_curvature: degenerate node placement");
    return table_from_nodes(op, "curvature-" + std::to_string(total), std::move(nodes));
}

FineTable baseline_macro_only(const OperatorSpec& op, std::span<const fp16::Code> grid,
                              int M, double tau, int sample_cap) {
    const CutpointSet cuts = dp_search(grid, op, M, tau, sample_cap);
    FineTable t;
    t.operator_name = op.name;
    t.tag = "macro-only-" + std::to_string(M);
    t.nodes.reserve(cuts.points.size());
    t.values.reserve(cuts.points.size());
    for (size_t i = 0; i < cuts.points.size(); ++i) {
        t.nodes.push_back(fp16::decode(cuts.points[i]));
        t.values.push_back(fp16::encode(cuts.values[i]));
    }
    return t;
}

double gamma_factor(int k, double u) {
    const double ku = k * u;
    if (ku >= 1.0) throw DomainError("gamma_factor: k*u must be < 1");
    return ku / (1.0 - ku);
}

std::optional<double> segment_bound(const OperatorSpec& op, double a, double b,
                                    const BoundParams& params, double y_a, double y_b) {
    if (!op.smooth) return std::nullopt;
    if (!(b > a)) throw DomainError("segment_bound: requires a < b");
    const int n = std::max(params.fpp_samples, 3);
    double max_fpp = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a + (b - a) * (static_cast<double>(i) / (n - 1));
        if (!op.domain(x)) continue;
        const double fpp = std::fabs(fpp_central(op, x));
        if (std::isfinite(fpp) && fpp > max_fpp) max_fpp = fpp;
    }
    const double interp = (b - a) * (b - a) / 8.0 * max_fpp;
    const double rounding = (gamma_factor(1, params.u_c) + gamma_factor(2, params.u_a)) *
                            (std::fabs(y_a) + std::fabs(y_b));
    return interp + rounding;
}

std::string compare_csv(std::span<const ErrorReport> reports) {
    std::vector<const ErrorReport*> order;
    order.reserve(reports.size());
    for (const auto& r : reports) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(),
                     [](const ErrorReport* a, const ErrorReport* b) {
                         return a->mean_rel < b->mean_rel;
                     });
    std::ostringstream os;
    os << "rank,tag,operator,mode,count,max_abs,mean_abs,max_rel,mean_rel\n";
    char buf[224];
    int rank = 1;
    for (const ErrorReport* r : order) {
        std::snprintf(buf, sizeof buf, "%d,%s,%s,%s,%zu,%.9g,%.9g,%.9g,%.9g\n", rank++,
                      r->baseline_tag.c_str(), r->operator_name.c_str(),
                      r->mode == EvalMode::Reference ? "reference" : "fp16-steps", r->count,
                      r->max_abs, r->mean_abs, r->max_rel, r->mean_rel);
        os << buf;
    }
    return os.str();
}

}  // namespace nli
