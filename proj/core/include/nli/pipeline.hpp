#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nli/evaluator.hpp"

namespace nli {

/// Signals crossing one stage boundary of the 4-stage engine.
struct StageRecord {
    int stage = 0;            // 1..4
    int index = -1;           // stage 1: macro interval
    double dx = 0.0;          // stage 1: aligned offset
    double u = 0.0;           // stage 2: scaled position
    int address = 0;          // stage 2: micro index
    double t = 0.0;           // stage 2: fractional coefficient
    int global = 0;           // stage 2: global table address
    double y0 = 0.0, y1 = 0.0, dy = 0.0;  // stage 3: table read, slope
    double y = 0.0;           // stage 4: interpolated output
};

/// Countable hardware resources of an address-translation layout.
struct ResourceReport {
    int comparators = 0;
    int multipliers = 0;
    int adders = 0;
    int table_entries = 0;
    int registers_16bit = 0;  // dedicated scale-factor registers
};

/// Cycle-level occupancy of the pipeline: after the 4-cycle fill, one result
/// completes per cycle.
struct PipelineTrace {
    struct Slot {
        int cycle;
        int stage;
        int input;  // 0-based input id
    };
    std::vector<Slot> slots;
    int fill_latency = 4;
    long completion_cycle = 0;  // cycle at which the last result emerges
};

/// Processes the batch through the 4 stages with Fp16Steps arithmetic at
/// every stage boundary; outputs are bitwise equal to
/// eval(..., Fp16Steps).
std::pair<std::vector<fp16::Code>, PipelineTrace>
run_pipeline(const TwoLevelLut& lut, std::span<const fp16::Code> xs);

/// Resource counts for "nli-two-level" or "flat-comparator".
ResourceReport resources(std::string_view config);

/// All intermediates of one input, one record per stage.
std::array<StageRecord, 4> stage_trace(const TwoLevelLut& lut, fp16::Code x);

/// CSV export (cycle, stage, input-id).
std::string trace_csv(const PipelineTrace& trace);

}  // namespace nli
