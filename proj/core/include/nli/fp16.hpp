#pragma once

#include <cstdint>
#include <vector>

namespace nli::fp16 {

/// IEEE 754 binary16 encoding. The 16-bit code is the atom of the domain
/// grid; all arithmetic on decoded values happens in double precision.
using Code = std::uint16_t;

inline constexpr Code kMaxFinite = 0x7BFF;   // +65504
inline constexpr Code kMinFinite = 0xFBFF;   // -65504
inline constexpr Code kOne = 0x3C00;
inline constexpr double kMaxValue = 65504.0;
inline constexpr double kUnitRoundoff = 0x1p-11;
inline constexpr double kSmallestNormal = 0x1p-14;

bool is_nan(Code c);
bool is_finite(Code c);

/// Exact value of a non-NaN code (+-inf decode to +-infinity).
double decode(Code c);

/// Round-to-nearest-even; finite overflow and +-inf saturate to +-65504.
/// Throws DomainError on NaN.
Code encode(double x);

/// Value-order rank of a finite code; -0 and +0 both map to rank 0, so the
/// rank space enumerates each represented value once (the +0 code is used).
std::int32_t rank(Code c);
Code from_rank(std::int32_t r);

/// Adjacent finite codes in value order; saturate at +-65504.
Code next_up(Code c);
Code next_down(Code c);

}  // namespace nli::fp16
