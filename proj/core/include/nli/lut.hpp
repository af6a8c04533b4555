#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>

#include "nli/dp_search.hpp"
#include "nli/fp16.hpp"
#include "nli/operators.hpp"

namespace nli {

inline constexpr int kMacroIntervals = 10;
inline constexpr int kNumEndpoints = 11;
inline constexpr int kBinsMiddle = 32;
inline constexpr int kLutEntries = 259;  // 2 + 8*32 + 1
inline constexpr std::string_view kLutFormatVersion = "nli-lut/1";

/// The deployable two-level table: 11 macro endpoints, 10 per-interval
/// scale factors and 259 function values, all FP16 codes. Derived
/// double-precision views and the realized fine-bin boundaries are cached
/// at validation time.
struct TwoLevelLut {
    std::string operator_name;
    std::array<fp16::Code, kNumEndpoints> endpoints{};
    std::array<fp16::Code, kMacroIntervals> scales{};
    std::array<fp16::Code, kLutEntries> values{};

    // derived, filled by validate()
    std::array<double, kNumEndpoints> endpoint_vals{};
    std::array<double, kMacroIntervals> scale_vals{};
    std::array<double, kLutEntries> value_vals{};
    /// Smallest code per global bin whose exact-double scaled offset reaches
    /// the bin; what a flat 259-comparator bank must store to agree with the
    /// two-level translation bit for bit.
    std::array<fp16::Code, kLutEntries> fine_boundaries{};

    static int base_index(int interval) { return interval == 0 ? 0 : 1 + (interval - 1) * kBinsMiddle; }
    static int bins(int interval) { return (interval >= 1 && interval <= 8) ? kBinsMiddle : 1; }

    /// Unrounded scale recomputed from the endpoints (diagnostics).
    double exact_scale(int interval) const;
    /// Real abscissa of table entry g (endpoint + bin * width / 32).
    double node_abscissa(int g) const;

    /// Checks all structural invariants and fills the derived fields.
    /// Throws LutFormatError on violation.
    void validate();
};

/// Construct the 259-entry table from 11 DP cutpoints: middle intervals get
/// 32 uniform bins, end intervals one chord; values and scales are computed
/// in double precision and rounded to FP16 (scales saturate at 65504).
TwoLevelLut build_lut(const CutpointSet& cuts, const OperatorSpec& op);

/// The published 11 macro endpoints shipped for the 9 standard operators.
CutpointSet load_appendix_cutpoints(std::string_view name);
std::vector<std::string> appendix_operator_names();

/// On-disk provenance carried next to the codes.
struct LutProvenance {
    double dp_cost = 0.0;
    std::string grid;
    std::string tool_version;
};

struct LutFile {
    TwoLevelLut lut;
    LutProvenance provenance;
};

/// Line-oriented text format, version "nli-lut/1"; hex codes are
/// authoritative, decimals informative. Deserialization re-validates all
/// TwoLevelLut invariants and throws LutFormatError on any malformation.
std::string serialize(const LutFile& file);
LutFile deserialize(std::string_view text);

void save_lut(const LutFile& file, const std::string& path);
LutFile load_lut(const std::string& path);

}  // namespace nli
