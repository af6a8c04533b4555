#include "nli/pipeline.hpp"

#include <sstream>

#include "nli/errors.hpp"

namespace nli {

std::pair<std::vector<fp16::Code>, PipelineTrace>
run_pipeline(const TwoLevelLut& lut, std::span<const fp16::Code> xs) {
    const int n = static_cast<int>(xs.size());
    PipelineTrace trace;
    trace.fill_latency = 4;
    trace.completion_cycle = n == 0 ? 0 : n + 3;  // input i finishes at cycle i+4

    std::vector<fp16::Code> out;
    out.reserve(xs.size());
    // Fully pipelined: on cycle c, input i occupies stage c - i (1-based).
    const long last_cycle = trace.completion_cycle;
    for (long c = 1; c <= last_cycle; ++c) {
        for (int stage = 1; stage <= 4; ++stage) {
            const long i = c - stage;
            if (i < 0 || i >= n) continue;
            trace.slots.push_back({static_cast<int>(c), stage, static_cast<int>(i)});
            if (stage == 4) out.push_back(eval(lut, xs[static_cast<size_t>(i)], EvalMode::Fp16Steps));
        }
    }
    return {std::move(out), std::move(trace)};
}

ResourceReport resources(std::string_view config) {
    if (config == "nli-two-level") {
        // 10 interval comparators; one scale multiply and one slope
        // multiply-add; 259 value entries; 10 scale registers.
        return {.comparators = kMacroIntervals,
                .multipliers = 2,
                .adders = 2,
                .table_entries = kLutEntries,
                .registers_16bit = kMacroIntervals};
    }
    if (config == "flat-comparator") {
        // One comparator per fine boundary plus saturation; node and value
        // stored per entry, next power of two for the address decoder.
        return {.comparators = kLutEntries,
                .multipliers = 1,
                .adders = 2,
                .table_entries = 512,
                .registers_16bit = 0};
    }
    throw DomainError("unknown pipeline config: " + std::string(config));
}

std::array<StageRecord, 4> stage_trace(const TwoLevelLut& lut, fp16::Code x) {
    const EvalSteps s = eval_steps(lut, x, EvalMode::Fp16Steps);
    std::array<StageRecord, 4> rec{};
    rec[0] = {.stage = 1, .index = s.index, .dx = s.dx};
    rec[1] = {.stage = 2, .index = s.index, .dx = s.dx, .u = s.u,
              .address = s.address, .t = s.t, .global = s.global};
    rec[2] = {.stage = 3, .index = s.index, .dx = s.dx, .u = s.u,
              .address = s.address, .t = s.t, .global = s.global,
              .y0 = s.y0, .y1 = s.y1, .dy = s.dy};
    rec[3] = {.stage = 4, .index = s.index, .dx = s.dx, .u = s.u,
              .address = s.address, .t = s.t, .global = s.global,
              .y0 = s.y0, .y1 = s.y1, .dy = s.dy, .y = s.y};
    return rec;
}

std::string trace_csv(const PipelineTrace& trace) {
    std::ostringstream os;
    os << "cycle,stage,input\n";
    for (const auto& slot : trace.slots)
        os << slot.cycle << ',' << slot.stage << ',' << slot.input << '\n';
    return os.str();
}

}  // namespace nli
