#include "nli/lut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nli/errors.hpp"

namespace nli {

namespace {

int interval_of_global(int g) {
    if (g < 0 || g >= kLutEntries) throw LutFormatError("global index out of range");
    if (g == 0) return 0;
    if (g >= 257) return 9;
    return 1 + (g - 1) / kBinsMiddle;
}

}  // namespace

double TwoLevelLut::exact_scale(int interval) const {
    const double lo = fp16::decode(endpoints[static_cast<size_t>(interval)]);
    const double hi = fp16::decode(endpoints[static_cast<size_t>(interval) + 1]);
    return static_cast<double>(bins(interval)) / (hi - lo);
}

double TwoLevelLut::node_abscissa(int g) const {
    if (g == kLutEntries - 1) return fp16::decode(endpoints[kNumEndpoints - 1]);
    const int I = interval_of_global(g);
    const int a = g - base_index(I);
    const double lo = fp16::decode(endpoints[static_cast<size_t>(I)]);
    const double hi = fp16::decode(endpoints[static_cast<size_t>(I) + 1]);
    return lo + a * ((hi - lo) / bins(I));
}

void TwoLevelLut::validate() {
    if (operator_name.empty()) throw LutFormatError("missing operator name");
    for (int i = 0; i < kNumEndpoints; ++i) {
        const fp16::Code c = endpoints[static_cast<size_t>(i)];
        if (fp16::is_nan(c) || !fp16::is_finite(c)) throw LutFormatError("non-finite endpoint");
        endpoint_vals[static_cast<size_t>(i)] = fp16::decode(c);
        if (i > 0 && !(endpoint_vals[static_cast<size_t>(i)] > endpoint_vals[static_cast<size_t>(i) - 1]))
            throw LutFormatError("endpoints not strictly increasing");
    }
    for (int i = 0; i < kMacroIntervals; ++i) {
        const fp16::Code c = scales[static_cast<size_t>(i)];
        if (fp16::is_nan(c) || !fp16::is_finite(c)) throw LutFormatError("non-finite scale");
        scale_vals[static_cast<size_t>(i)] = fp16::decode(c);
        if (!(scale_vals[static_cast<size_t>(i)] > 0.0)) throw LutFormatError("scale not positive");
    }
    for (int g = 0; g < kLutEntries; ++g) {
        const fp16::Code c = values[static_cast<size_t>(g)];
        if (fp16::is_nan(c) || !fp16::is_finite(c)) throw LutFormatError("non-finite table value");
        value_vals[static_cast<size_t>(g)] = fp16::decode(c);
    }

    // Realized fine-bin boundaries: for each global bin g, the smallest code
    // in [P0, P10] whose two-level translation lands in bin >= g. Monotone in
    // the code's rank, so a binary search per bin suffices.
    const auto global_of = [this](fp16::Code c) {
        const double x = fp16::decode(c);
        if (x >= endpoint_vals[kNumEndpoints - 1]) return kLutEntries - 1;
        int I = kMacroIntervals - 1;
        for (int i = 1; i < kNumEndpoints - 1; ++i) {
            if (x < endpoint_vals[static_cast<size_t>(i)]) {
                I = i - 1;
                break;
            }
        }
        const double u = (x - endpoint_vals[static_cast<size_t>(I)]) * scale_vals[static_cast<size_t>(I)];
        const int a = std::min(static_cast<int>(std::floor(u)), bins(I) - 1);
        return base_index(I) + std::max(0, a);
    };

    const std::int32_t lo_rank = fp16::rank(endpoints[0]);
    const std::int32_t hi_rank = fp16::rank(endpoints[kNumEndpoints - 1]);
    fine_boundaries[0] = endpoints[0];
    fine_boundaries[kLutEntries - 1] = endpoints[kNumEndpoints - 1];
    for (int g = 1; g < kLutEntries - 1; ++g) {
        std::int32_t lo = lo_rank, hi = hi_rank;  // invariant: global(lo) < g <= global(hi)
        if (global_of(fp16::from_rank(lo)) >= g) {
            fine_boundaries[static_cast<size_t>(g)] = endpoints[0];
            continue;
        }
        while (hi - lo > 1) {
            const std::int32_t mid = lo + (hi - lo) / 2;
            if (global_of(fp16::from_rank(mid)) >= g)
                hi = mid;
            else
                lo = mid;
        }
        fine_boundaries[static_cast<size_t>(g)] = fp16::from_rank(hi);
    }
}

TwoLevelLut build_lut(const CutpointSet& cuts, const OperatorSpec& op) {
    if (cuts.points.size() != static_cast<size_t>(kNumEndpoints))
        throw DomainError("build_lut: expected 11 cutpoints");
    TwoLevelLut lut;
    lut.operator_name = op.name;
    std::copy(cuts.points.begin(), cuts.points.end(), lut.endpoints.begin());

    std::array<double, kNumEndpoints> px{};
    for (int i = 0; i < kNumEndpoints; ++i) px[static_cast<size_t>(i)] = fp16::decode(lut.endpoints[static_cast<size_t>(i)]);

    for (int I = 0; I < kMacroIntervals; ++I) {
        const double width = px[static_cast<size_t>(I) + 1] - px[static_cast<size_t>(I)];
        if (!(width > 0.0)) throw DomainError("build_lut: endpoints not strictly increasing");
        lut.scales[static_cast<size_t>(I)] = fp16::encode(TwoLevelLut::bins(I) / width);
    }

    const auto put = [&](int g, double x) {
        const double y = eval_exact(op, x);
        if (!std::isfinite(y)) throw DomainError("build_lut: non-finite function value");
        lut.values[static_cast<size_t>(g)] = fp16::encode(y);
    };
    put(0, px[0]);
    for (int I = 1; I <= 8; ++I) {
        const double lo = px[static_cast<size_t>(I)];
        const double step = (px[static_cast<size_t>(I) + 1] - lo) / kBinsMiddle;
        for (int a = 0; a < kBinsMiddle; ++a) put(TwoLevelLut::base_index(I) + a, lo + a * step);
    }
    put(257, px[9]);
    put(258, px[10]);

    lut.validate();
    return lut;
}

namespace {

struct AppendixRow {
    const char* name;
    double points[kNumEndpoints];
    bool exact_decimals;  // false when the published row uses rounded scientific notation
};

constexpr AppendixRow kAppendix[] = {
    {"gelu",
     {-5.5390625, -5.15625, -3.18359375, -0.98046875, -0.1229248046875, -0.00374603271484375,
      0.0035247802734375, 0.11322021484375, 0.78076171875, 4.10546875, 65504.0},
     true},
    {"silu",
     {-20.359375, -17.109375, -8.3671875, -1.9755859375, -0.255615234375, -0.007244110107421875,
      0.0072174072265625, 0.228515625, 1.58203125, 10.46875, 65504.0},
     true},
    {"exp",
     {-17.34375, -15.171875, -8.890625, -5.2734375, -2.35546875, -0.3583984375, 0.91650390625,
      3.451171875, 6.84765625, 10.9453125, 11.0859375},
     true},
    {"reciprocal",
     {1.5318394e-05, 2.2590160e-05, 4.6992302e-04, 7.0533752e-03, 8.8378906e-02, 1.07421875,
      15.546875, 244.5, 3694.0, 46560.0, 65504.0},
     false},
    {"rsqrt",
     {5.9604645e-08, 7.7486038e-07, 1.1140108e-04, 1.8644333e-03, 3.0029297e-02, 0.48193359375,
      7.7734375, 129.75, 2406.0, 47456.0, 65504.0},
     false},
    {"hardswish",
     {-3.0, -2.984375, -1.87890625, -0.5390625, -0.059326171875, -0.000743865966796875,
      0.0034942626953125, 0.11968994140625, 0.78369140625, 3.001953125, 65504.0},
     true},
    {"tanh",
     {-4.5078125, -3.79296875, -1.55078125, -0.5302734375, -0.028564453125, 0.0364990234375,
      0.423828125, 1.076171875, 2.0390625, 4.0625, 4.5078125},
     true},
    {"mish",
     {-20.34375, -19.90625, -10.921875, -6.2265625, -1.615234375, -0.237060546875,
      -0.00699615478515625, 0.01538848876953125, 0.491455078125, 4.70703125, 65504.0},
     true},
    {"sigmoid",
     {-17.34375, -15.765625, -10.65625, -8.15625, -6.3046875, -4.421875, -2.6640625,
      -0.7998046875, 1.9462890625, 6.90234375, 8.3203125},
     true},
};

}  // namespace

CutpointSet load_appendix_cutpoints(std::string_view name) {
    const AppendixRow* row = nullptr;
    for (const auto& r : kAppendix) {
        if (name == r.name) {
            row = &r;
            break;
        }
    }
    if (!row) throw UnknownOperatorError(std::string(name));
    const OperatorSpec& op = get_operator(name);
    CutpointSet cuts;
    cuts.cost = 0.0;
    for (double d : row->points) {
        const fp16::Code c = fp16::encode(d);
        if (row->exact_decimals && fp16::decode(c) != d)
            throw DomainError("appendix cutpoint not representable in FP16");
        cuts.points.push_back(c);
        cuts.values.push_back(eval_exact(op, fp16::decode(c)));
    }
    return cuts;
}

std::vector<std::string> appendix_operator_names() {
    std::vector<std::string> names;
    for (const auto& r : kAppendix) names.emplace_back(r.name);
    return names;
}

namespace {

std::string code_line(fp16::Code c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "0x%04x %.17g", c, fp16::decode(c));
    return buf;
}

fp16::Code parse_code_line(const std::string& line) {
    std::istringstream is(line);
    std::string hex;
    if (!(is >> hex) || hex.size() != 6 || hex[0] != '0' || hex[1] != 'x')
        throw LutFormatError("bad code line: " + line);
    unsigned v = 0;
    for (size_t i = 2; i < hex.size(); ++i) {
        const char ch = hex[i];
        v <<= 4;
        if (ch >= '0' && ch <= '9')
            v |= static_cast<unsigned>(ch - '0');
        else if (ch >= 'a' && ch <= 'f')
            v |= static_cast<unsigned>(ch - 'a' + 10);
        else
            throw LutFormatError("bad hex digit in: " + line);
    }
    return static_cast<fp16::Code>(v);
}

}  // namespace

std::string serialize(const LutFile& file) {
    std::ostringstream os;
    os << kLutFormatVersion << "\n";
    os << "operator " << file.lut.operator_name << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", file.provenance.dp_cost);
    os << "dp_cost " << buf << "\n";
    os << "grid " << file.provenance.grid << "\n";
    os << "tool " << file.provenance.tool_version << "\n";
    os << "endpoints " << kNumEndpoints << "\n";
    for (fp16::Code c : file.lut.endpoints) os << code_line(c) << "\n";
    os << "scales " << kMacroIntervals << "\n";
    for (fp16::Code c : file.lut.scales) os << code_line(c) << "\n";
    os << "values " << kLutEntries << "\n";
    for (fp16::Code c : file.lut.values) os << code_line(c) << "\n";
    os << "end\n";
    return os.str();
}

LutFile deserialize(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    const auto next = [&]() -> std::string& {
        if (!std::getline(is, line)) throw LutFormatError("unexpected end of file");
        return line;
    };
    const auto expect_key = [](const std::string& ln, const std::string& key) -> std::string {
        if (ln.compare(0, key.size(), key) != 0 ||
            (ln.size() > key.size() && ln[key.size()] != ' '))
            throw LutFormatError("expected '" + key + "' line, got: " + ln);
        return ln.size() > key.size() ? ln.substr(key.size() + 1) : std::string();
    };

    if (next() != kLutFormatVersion) throw LutFormatError("unknown format version: " + line);
    LutFile file;
    file.lut.operator_name = expect_key(next(), "operator");
    {
        const std::string v = expect_key(next(), "dp_cost");
        size_t pos = 0;
        try {
            file.provenance.dp_cost = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw LutFormatError("bad dp_cost: " + v);
        }
        if (pos != v.size()) throw LutFormatError("bad dp_cost: " + v);
    }
    file.provenance.grid = expect_key(next(), "grid");
    file.provenance.tool_version = expect_key(next(), "tool");

    const auto read_block = [&](const std::string& key, int count, fp16::Code* out) {
        const std::string n = expect_key(next(), key);
        if (n != std::to_string(count)) throw LutFormatError(key + " count must be " + std::to_string(count));
        for (int i = 0; i < count; ++i) out[i] = parse_code_line(next());
    };
    read_block("endpoints", kNumEndpoints, file.lut.endpoints.data());
    read_block("scales", kMacroIntervals, file.lut.scales.data());
    read_block("values", kLutEntries, file.lut.values.data());
    if (next() != "end") throw LutFormatError("missing 'end' line");

    file.lut.validate();
    return file;
}

void save_lut(const LutFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << serialize(file);
    if (!out) throw Error("write failed: " + path);
}

LutFile load_lut(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

}  // namespace nli
