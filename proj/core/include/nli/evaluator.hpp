#pragma once

#include <span>
#include <vector>

#include "nli/lut.hpp"

namespace nli {

/// Reference keeps all intermediates in double precision and rounds once at
/// the end; Fp16Steps rounds every intermediate (dx, u, t, dy, product,
/// sum), mirroring the hardware datapath.
enum class EvalMode { Reference, Fp16Steps };

/// Outcome of the two-level address translation for one input.
struct AddressDecomposition {
    int index = 0;     // macro interval 0..9
    int address = 0;   // bin within the interval (0 for end intervals)
    double decimal = 0.0;  // fractional position within the bin, [0, 1]
    int global = 0;    // global table index, 0..257
};

/// Every intermediate of the staged evaluation of one input.
struct EvalSteps {
    bool saturated_lo = false, saturated_hi = false;
    int index = 0;
    double dx = 0.0, u = 0.0;
    int address = 0, global = 0;
    double t = 0.0, y0 = 0.0, y1 = 0.0, dy = 0.0, prod = 0.0, y = 0.0;
    fp16::Code result = 0;
};

/// Clamp to the table domain, select the macro interval with the 10-way
/// comparison chain, derive bin and fraction by one multiply and a floor.
/// Total on finite inputs.
AddressDecomposition locate(const TwoLevelLut& lut, fp16::Code x);

/// Full forward flow; inputs outside [Point[0], Point[10]] return LUT[0] /
/// LUT[258] exactly.
fp16::Code eval(const TwoLevelLut& lut, fp16::Code x, EvalMode mode);
EvalSteps eval_steps(const TwoLevelLut& lut, fp16::Code x, EvalMode mode);

std::vector<fp16::Code> eval_batch(const TwoLevelLut& lut,
                                   std::span<const fp16::Code> xs, EvalMode mode);

/// Comparator-bank oracle: locates the fine bin by a linear scan over the
/// 258 realized sub-interval boundaries, then interpolates with the
/// identical arithmetic (Reference mode). Bitwise equal to eval by design of
/// the boundary codes; the scan is the 259-comparison baseline the two-level
/// translation replaces.
fp16::Code naive_eval(const TwoLevelLut& lut, fp16::Code x);

}  // namespace nli
