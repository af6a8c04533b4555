#include <doctest.h>

#include <cmath>
#include <random>

#include "nli/dp_search.hpp"
#include "nli/errors.hpp"

using namespace nli;

namespace {

std::vector<double> decode_all(const std::vector<fp16::Code>& grid) {
    std::vector<double> xs(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) xs[i] = fp16::decode(grid[i]);
    return xs;
}

std::vector<double> eval_all(const std::vector<double>& xs, const OperatorSpec& op) {
    std::vector<double> ys(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) ys[i] = eval_exact(op, xs[i]);
    return ys;
}

// recursive enumeration of all interior cutpoint placements, same objective
// primitives and accumulation order as the DP
struct BruteForce {
    const std::vector<double>&xs, &ys, &inv;
    int sample_cap;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_idx, cur;

    void place(int level, int M, int from) {
        const int N = static_cast<int>(xs.size());
        if (level == M) {
            double cost = boundary_cost(ys, inv, cur[0]);
            for (int s = 0; s + 1 < M; ++s)
                cost += segment_error(xs, ys, inv, cur[static_cast<size_t>(s)],
                                      cur[static_cast<size_t>(s) + 1], sample_cap);
            cost += tail_cost(ys, inv, cur[static_cast<size_t>(M) - 1]);
            if (cost < best) {
                best = cost;
                best_idx = cur;
            }
            return;
        }
        for (int k = from; k < N - (M - 1 - level); ++k) {
            cur.push_back(k);
            place(level + 1, M, k + 1);
            cur.pop_back();
        }
    }
};

}  // namespace

TEST_CASE("segment_error closed forms") {
    const auto& exp_op = get_operator("exp");
    SUBCASE("linear function gives zero") {
        const auto& op = get_operator("identity");
        const auto grid = enumerate_grid({-2.0, 2.0, 97}, op);
        const auto xs = decode_all(grid);
        const auto ys = eval_all(xs, op);
        const auto inv = make_inv_denominators(ys, kDefaultTau);
        CHECK(segment_error(xs, ys, inv, 0, static_cast<int>(xs.size()) - 1, 512) == 0.0);
    }
    SUBCASE("adjacent points give zero") {
        const std::vector<fp16::Code> grid = {fp16::encode(0.0), fp16::encode(0.5)};
        const std::vector<double> ys = {1.0, std::exp(0.5)};
        CHECK(segment_error(grid, ys, 0, 1, kDefaultTau, 512) == 0.0);
    }
    SUBCASE("exp on {0, 0.5, 1}") {
        const std::vector<fp16::Code> grid = {fp16::encode(0.0), fp16::encode(0.5),
                                              fp16::encode(1.0)};
        const std::vector<double> ys = {std::exp(0.0), std::exp(0.5), std::exp(1.0)};
        // (1/3)*|e^0.5 - (1+e)/2| / e^0.5, evaluated independently
        CHECK(segment_error(grid, ys, 0, 2, kDefaultTau, 512) ==
              doctest::Approx(0.0425419884021269).epsilon(1e-13));
    }
    SUBCASE("argument validation") {
        const std::vector<fp16::Code> grid = {fp16::encode(0.0), fp16::encode(1.0)};
        const std::vector<double> ys = {1.0, 2.0};
        CHECK_THROWS_AS(segment_error(grid, ys, 1, 1, kDefaultTau, 512), DomainError);
        CHECK_THROWS_AS(segment_error(grid, ys, 0, 1, kDefaultTau, 1), DomainError);
    }
    SUBCASE("subsampled value is deterministic and close to exact") {
        const auto grid = enumerate_grid({0.0, 4.0, 1}, exp_op);
        const auto xs = decode_all(grid);
        const auto ys = eval_all(xs, exp_op);
        const auto inv = make_inv_denominators(ys, kDefaultTau);
        const int k = static_cast<int>(xs.size()) - 1;
        const double capped = segment_error(xs, ys, inv, 0, k, 512);
        CHECK(capped == segment_error(xs, ys, inv, 0, k, 512));  // bit-stable
        const double exact = segment_error(xs, ys, inv, 0, k, static_cast<int>(xs.size()));
        CHECK(capped == doctest::Approx(exact).epsilon(0.02));
    }
}

TEST_CASE("boundary_cost") {
    const std::vector<fp16::Code> grid = {fp16::encode(-2.0), fp16::encode(-1.0),
                                          fp16::encode(0.0)};
    const std::vector<double> ys = {std::exp(-2.0), std::exp(-1.0), std::exp(0.0)};
    CHECK(boundary_cost(grid, ys, 0, kDefaultTau) == 0.0);
    // (1/2) * |e^-2 - e^-1| / e^-2, evaluated independently
    CHECK(boundary_cost(grid, ys, 1, kDefaultTau) ==
          doctest::Approx(0.8591409142295225).epsilon(1e-13));
    const std::vector<double> c = {5.0, 5.0, 5.0};
    CHECK(boundary_cost(grid, c, 2, kDefaultTau) == 0.0);
}

TEST_CASE("tail_cost") {
    const std::vector<fp16::Code> grid = {fp16::encode(0.0), fp16::encode(1.0),
                                          fp16::encode(2.0)};
    const std::vector<double> ys = {std::exp(0.0), std::exp(1.0), std::exp(2.0)};
    CHECK(tail_cost(grid, ys, 2, kDefaultTau) == 0.0);
    // |e^2 - e| / e^2 = 1 - 1/e
    CHECK(tail_cost(grid, ys, 1, kDefaultTau) ==
          doctest::Approx(0.6321205588285576).epsilon(1e-13));
    const std::vector<double> c = {5.0, 5.0, 5.0};
    CHECK(tail_cost(grid, c, 0, kDefaultTau) == 0.0);
}

TEST_CASE("dp_search trivial optima") {
    SUBCASE("linear operator, M=2 selects the extremes with zero cost") {
        const auto& op = get_operator("identity");
        const auto grid = enumerate_grid({1.0, 3.0, 33}, op);
        const auto cuts = dp_search(grid, op, 2);
        CHECK(cuts.cost == 0.0);
        CHECK(cuts.points.front() == grid.front());
        CHECK(cuts.points.back() == grid.back());
    }
    SUBCASE("M = N selects every point with zero cost") {
        const auto& op = get_operator("exp");
        const auto grid = enumerate_grid({0.0, 1.0, 97}, op);
        const auto cuts = dp_search(grid, op, static_cast<int>(grid.size()));
        CHECK(cuts.cost == 0.0);
        CHECK(cuts.points == grid);
    }
    SUBCASE("argument validation") {
        const auto& op = get_operator("exp");
        const auto grid = enumerate_grid({0.0, 1.0, 200}, op);
        CHECK_THROWS_AS(dp_search(grid, op, 1), DomainError);
        CHECK_THROWS_AS(dp_search(grid, op, static_cast<int>(grid.size()) + 1), DomainError);
    }
}

TEST_CASE("dp_search equals brute force bitwise on random small instances") {
    std::mt19937 rng(42);
    const char* ops[] = {"exp", "sigmoid", "identity"};
    const double ranges[][2] = {{-4.0, 4.0}, {-6.0, 6.0}, {-1.0, 2.0}};
    int instances = 0;
    while (instances < 24) {
        const int which = static_cast<int>(rng() % 3);
        const auto& op = get_operator(ops[which]);
        const int M = 2 + static_cast<int>(rng() % 4);
        const int stride = 400 + static_cast<int>(rng() % 1200);
        const auto grid = enumerate_grid({ranges[which][0], ranges[which][1], stride}, op);
        if (static_cast<int>(grid.size()) < M || grid.size() > 26) continue;
        ++instances;

        const auto xs = decode_all(grid);
        const auto ys = eval_all(xs, op);
        const auto inv = make_inv_denominators(ys, kDefaultTau);
        BruteForce bf{xs, ys, inv, kDefaultSampleCap};
        bf.place(0, M, 0);

        const auto cuts = dp_search(grid, op, M);
        INFO("op=", ops[which], " M=", M, " N=", grid.size());
        CHECK(cuts.cost == bf.best);  // bitwise: same primitives, same order
        REQUIRE(cuts.points.size() == bf.best_idx.size());
        for (size_t i = 0; i < bf.best_idx.size(); ++i)
            CHECK(cuts.points[i] == grid[static_cast<size_t>(bf.best_idx[i])]);
    }
}

TEST_CASE("dp cost is monotone in the budget") {
    const auto& op = get_operator("exp");
    const auto grid = enumerate_grid({-4.0, 4.0, 64}, op);
    double prev = std::numeric_limits<double>::infinity();
    for (int M = 2; M <= 8; ++M) {
        const double cost = dp_search(grid, op, M).cost;
        CHECK(cost <= prev);
        prev = cost;
    }
}

TEST_CASE("dp_search is deterministic") {
    const auto& op = get_operator("tanh");
    const auto grid = enumerate_grid({-3.0, 3.0, 64}, op);
    const auto a = dp_search(grid, op, 6);
    const auto b = dp_search(grid, op, 6);
    CHECK(a.points == b.points);
    CHECK(a.cost == b.cost);
}

TEST_CASE("DP tables respect their structural invariants") {
    const auto& op = get_operator("sigmoid");
    const auto grid = enumerate_grid({-2.0, 2.0, 64}, op);
    const int N = static_cast<int>(grid.size());
    DpTables dp;
    dp_search(grid, op, 4, kDefaultTau, kDefaultSampleCap, &dp);
    REQUIRE(dp.num_cutpoints == 4);
    REQUIRE(dp.grid_size == N);
    for (int k = 0; k < N; ++k) {
        CHECK(std::isfinite(dp.cost_at(0, k)));
        CHECK(dp.pred_at(0, k) == k);
    }
    for (int L = 1; L < 4; ++L) {
        for (int k = 0; k < N; ++k) {
            if (k < L) {
                CHECK(dp.cost_at(L, k) == std::numeric_limits<double>::infinity());
            } else {
                CHECK(std::isfinite(dp.cost_at(L, k)));
                CHECK(dp.pred_at(L, k) < k);
            }
        }
    }
}

TEST_CASE("cost_of") {
    const auto& op = get_operator("exp");
    const auto grid = enumerate_grid({-2.0, 2.0, 64}, op);
    const auto cuts = dp_search(grid, op, 5, kDefaultTau, static_cast<int>(grid.size()));
    SUBCASE("self-consistency with the search result") {
        CHECK(cost_of(cuts, grid, op) == doctest::Approx(cuts.cost).epsilon(1e-12));
    }
    SUBCASE("perturbing one interior point never improves the cost") {
        for (int slot = 1; slot <= 3; ++slot) {
            for (int dir : {-1, +1}) {
                CutpointSet moved = cuts;
                auto it = std::find(grid.begin(), grid.end(), moved.points[static_cast<size_t>(slot)]);
                REQUIRE(it != grid.end());
                const auto ni = (it - grid.begin()) + dir;
                REQUIRE(ni >= 0);
                REQUIRE(static_cast<size_t>(ni) < grid.size());
                moved.points[static_cast<size_t>(slot)] = grid[static_cast<size_t>(ni)];
                if (std::adjacent_find(moved.points.begin(), moved.points.end()) !=
                    moved.points.end())
                    continue;
                CHECK(cost_of(moved, grid, op) >= cuts.cost);
            }
        }
    }
    SUBCASE("off-grid points are rejected") {
        CutpointSet bogus = cuts;
        bogus.points[2] = fp16::next_up(bogus.points[2]);
        if (std::find(grid.begin(), grid.end(), bogus.points[2]) == grid.end())
            CHECK_THROWS_AS(cost_of(bogus, grid, op), DomainError);
    }
}
