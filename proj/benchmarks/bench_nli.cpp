#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nli/dp_search.hpp"
#include "nli/evaluator.hpp"
#include "nli/lut.hpp"
#include "nli/pipeline.hpp"

using namespace nli;

namespace {

const TwoLevelLut& exp_lut() {
    static const TwoLevelLut lut =
        build_lut(load_appendix_cutpoints("exp"), get_operator("exp"));
    return lut;
}

std::vector<fp16::Code> random_inputs(size_t n) {
    std::mt19937 rng(12345);
    std::vector<fp16::Code> xs(n);
    for (auto& x : xs)
        x = fp16::from_rank(static_cast<std::int32_t>(rng() % 63487) - 31743);
    return xs;
}

void bm_eval_reference(benchmark::State& state) {
    const auto& lut = exp_lut();
    const auto xs = random_inputs(4096);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval(lut, xs[i++ & 4095], EvalMode::Reference));
    }
}
BENCHMARK(bm_eval_reference);

void bm_eval_fp16_steps(benchmark::State& state) {
    const auto& lut = exp_lut();
    const auto xs = random_inputs(4096);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval(lut, xs[i++ & 4095], EvalMode::Fp16Steps));
    }
}
BENCHMARK(bm_eval_fp16_steps);

void bm_locate(benchmark::State& state) {
    const auto& lut = exp_lut();
    const auto xs = random_inputs(4096);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(locate(lut, xs[i++ & 4095]));
    }
}
BENCHMARK(bm_locate);

void bm_naive_scan(benchmark::State& state) {
    const auto& lut = exp_lut();
    const auto xs = random_inputs(4096);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(naive_eval(lut, xs[i++ & 4095]));
    }
}
BENCHMARK(bm_naive_scan);

void bm_pipeline_batch(benchmark::State& state) {
    const auto& lut = exp_lut();
    const auto xs = random_inputs(static_cast<size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_pipeline(lut, xs));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_pipeline_batch)->Arg(1024)->Arg(16384);

void bm_dp_search(benchmark::State& state) {
    const auto& op = get_operator("sigmoid");
    const auto grid = enumerate_grid({-8.0, 8.0, static_cast<int>(state.range(0))}, op);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dp_search(grid, op, kNumEndpoints));
    }
    state.SetLabel("N=" + std::to_string(grid.size()));
}
BENCHMARK(bm_dp_search)->Arg(256)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
