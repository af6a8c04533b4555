// Command-line front end: cutpoint search, table build/inspection,
// evaluation, error sweeps, baseline comparison, pipeline traces, and
// verification of the shipped endpoint tables.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nli/composite.hpp"
#include "nli/dp_search.hpp"
#include "nli/error_analysis.hpp"
#include "nli/errors.hpp"
#include "nli/pipeline.hpp"

namespace {

constexpr const char* kToolVersion = "nli-0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct GridOptions {
    double lo = 0.0, hi = 0.0;
    bool have_lo = false, have_hi = false;
    int stride = 16;
};

void add_grid_options(CLI::App* cmd, GridOptions& g) {
    cmd->add_option("--lo", g.lo, "grid lower bound (default: operator range)")
        ->each([&](const std::string&) { g.have_lo = true; });
    cmd->add_option("--hi", g.hi, "grid upper bound (default: operator range)")
        ->each([&](const std::string&) { g.have_hi = true; });
    cmd->add_option("--stride", g.stride, "take every stride-th FP16 code")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::vector<nli::fp16::Code> make_grid(const GridOptions& g, const nli::OperatorSpec& op) {
    const double lo = g.have_lo ? g.lo : op.range_lo;
    const double hi = g.have_hi ? g.hi : op.range_hi;
    if (g.stride == 1)
        std::cerr << "note: stride 1 sweeps the full FP16 grid; the search is O(N^2) "
                     "and may take a long time\n";
    return nli::enumerate_grid({lo, hi, g.stride}, op);
}

nli::fp16::Code parse_input(const std::string& token) {
    if (token.rfind("0x", 0) == 0 || token.rfind("0X", 0) == 0) {
        size_t pos = 0;
        const unsigned long v = std::stoul(token.substr(2), &pos, 16);
        if (pos != token.size() - 2 || v > 0xFFFF)
            throw nli::DomainError("bad FP16 code: " + token);
        return static_cast<nli::fp16::Code>(v);
    }
    size_t pos = 0;
    const double d = std::stod(token, &pos);
    if (pos != token.size()) throw nli::DomainError("bad input value: " + token);
    return nli::fp16::encode(d);
}

int cmd_search(const std::string& op_name, const GridOptions& gopts, int M, int sample_cap,
               const std::string& out_path) {
    const auto& op = nli::get_operator(op_name);
    const auto grid = make_grid(gopts, op);
    const auto t0 = std::chrono::steady_clock::now();
    const auto cuts = nli::dp_search(grid, op, M, nli::kDefaultTau, sample_cap);
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);

    nli::LutFile file;
    file.lut = nli::build_lut(cuts, op);
    file.provenance.dp_cost = cuts.cost;
    char grid_desc[96];
    std::snprintf(grid_desc, sizeof grid_desc, "lo=%.17g hi=%.17g stride=%d n=%zu",
                  nli::fp16::decode(grid.front()), nli::fp16::decode(grid.back()),
                  gopts.stride, grid.size());
    file.provenance.grid = grid_desc;
    file.provenance.tool_version = kToolVersion;
    nli::save_lut(file, out_path);

    std::printf("operator=%s grid_points=%zu dp_cost=%.9g wall_seconds=%.2f out=%s\n",
                op_name.c_str(), grid.size(), cuts.cost, secs.count(), out_path.c_str());
    return kExitOk;
}

int cmd_build(const std::string& op_name, const std::string& out_path) {
    const auto& op = nli::get_operator(op_name);
    nli::LutFile file;
    file.lut = nli::build_lut(nli::load_appendix_cutpoints(op_name), op);
    file.provenance.dp_cost = 0.0;
    file.provenance.grid = "published-endpoints";
    file.provenance.tool_version = kToolVersion;
    nli::save_lut(file, out_path);
    std::printf("operator=%s source=published out=%s\n", op_name.c_str(), out_path.c_str());
    return kExitOk;
}

int cmd_eval(const std::string& lut_path, const std::vector<std::string>& inputs,
             bool fp16_steps) {
    const auto file = nli::load_lut(lut_path);
    const nli::EvalMode mode = fp16_steps ? nli::EvalMode::Fp16Steps : nli::EvalMode::Reference;
    std::printf("x_hex,x,y_hex,y\n");
    for (const auto& token : inputs) {
        const nli::fp16::Code x = parse_input(token);
        const nli::fp16::Code y = nli::eval(file.lut, x, mode);
        std::printf("0x%04x,%.17g,0x%04x,%.17g\n", x, nli::fp16::decode(x), y,
                    nli::fp16::decode(y));
    }
    return kExitOk;
}

int cmd_sweep(const std::string& lut_path, const GridOptions& gopts, bool fp16_steps,
              bool points) {
    const auto file = nli::load_lut(lut_path);
    const auto& op = nli::get_operator(file.lut.operator_name);
    const auto grid = make_grid(gopts, op);
    const nli::EvalMode mode = fp16_steps ? nli::EvalMode::Fp16Steps : nli::EvalMode::Reference;
    if (points) {
        std::fputs(nli::sweep_points_csv(file.lut, op, grid, mode).c_str(), stdout);
        return kExitOk;
    }
    auto rep = nli::sweep(file.lut, op, grid, mode);
    rep.grid_desc = file.provenance.grid;
    std::fputs(nli::compare_csv({&rep, 1}).c_str(), stdout);
    std::printf("# argmax_abs at 0x%04x (err %.9g), argmax_rel at 0x%04x (err %.9g)\n",
                rep.argmax_abs_x, rep.argmax_abs_err, rep.argmax_rel_x, rep.argmax_rel_err);
    return kExitOk;
}

int cmd_compare(const std::string& op_name, const GridOptions& gopts, int sample_cap) {
    const auto& op = nli::get_operator(op_name);
    const auto grid = nli::enumerate_grid({op.range_lo, op.range_hi, 1}, op);
    const auto search_grid = make_grid(gopts, op);

    std::vector<nli::ErrorReport> reports;
    const auto lut = nli::build_lut(nli::load_appendix_cutpoints(op_name), op);
    reports.push_back(nli::sweep(lut, op, grid, nli::EvalMode::Reference));
    reports.push_back(nli::sweep_fine(nli::baseline_uniform(op), op, grid));
    reports.push_back(nli::sweep_fine(nli::baseline_curvature(op), op, grid));
    reports.push_back(nli::sweep_fine(
        nli::baseline_macro_only(op, search_grid, nli::kNumEndpoints, nli::kDefaultTau,
                                 sample_cap),
        op, grid));
    std::fputs(nli::compare_csv(reports).c_str(), stdout);
    return kExitOk;
}

int cmd_trace(const std::string& lut_path, const std::string& x_token) {
    const auto file = nli::load_lut(lut_path);
    const nli::fp16::Code x = parse_input(x_token);
    const auto rec = nli::stage_trace(file.lut, x);
    std::printf("stage,index,dx,u,address,t,global,y0,y1,dy,y\n");
    for (const auto& r : rec)
        std::printf("%d,%d,%.9g,%.9g,%d,%.9g,%d,%.9g,%.9g,%.9g,%.9g\n", r.stage, r.index,
                    r.dx, r.u, r.address, r.t, r.global, r.y0, r.y1, r.dy, r.y);
    const auto res = nli::resources("nli-two-level");
    std::printf("# resources: comparators=%d multipliers=%d adders=%d entries=%d "
                "scale_registers=%d\n",
                res.comparators, res.multipliers, res.adders, res.table_entries,
                res.registers_16bit);
    return kExitOk;
}

int cmd_verify_appendix(int stride, int sample_cap) {
    int failures = 0;
    for (const auto& name : nli::appendix_operator_names()) {
        const auto& op = nli::get_operator(name);
        const auto cuts_pub = nli::load_appendix_cutpoints(name);
        const auto lut = nli::build_lut(cuts_pub, op);

        const auto grid = nli::enumerate_grid({op.range_lo, op.range_hi, 1}, op);
        const auto rep = nli::sweep(lut, op, grid, nli::EvalMode::Reference);
        const double gate = (name == "exp" || name == "rsqrt") ? 1.2e-3 : 1.5e-3;
        const bool abs_ok = rep.max_abs <= gate;

        const auto search_grid = nli::enumerate_grid_with_anchors(
            {op.range_lo, op.range_hi, stride}, op, cuts_pub.points);
        const auto cuts = nli::dp_search(search_grid, op, nli::kNumEndpoints,
                                         nli::kDefaultTau, sample_cap);
        const double pub_cost = nli::cost_of(cuts_pub, search_grid, op);
        const bool cost_ok = cuts.cost <= 1.05 * pub_cost;

        if (!abs_ok || !cost_ok) ++failures;
        std::printf("%-10s max_abs=%.6g gate=%.2g %s argmax=0x%04x | dp_cost=%.6g "
                    "published_cost=%.6g %s\n",
                    name.c_str(), rep.max_abs, gate, abs_ok ? "OK" : "EXCEEDED",
                    rep.argmax_abs_x, cuts.cost, pub_cost, cost_ok ? "OK" : "DOMINATED");
    }
    return failures == 0 ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-uniform linear-interpolation table toolkit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    unsigned seed = 0;
    app.add_option("--seed", seed, "seed for randomized helpers")->capture_default_str();

    std::string op_name, lut_path, out_path = "out.lut", x_token;
    std::vector<std::string> inputs;
    GridOptions gopts;
    int M = nli::kNumEndpoints;
    int sample_cap = nli::kDefaultSampleCap;
    bool fp16_steps = false, points = false;

    auto* search = app.add_subcommand("search", "DP cutpoint search, builds and writes a LUT");
    search->add_option("--op", op_name, "operator name")->required();
    add_grid_options(search, gopts);
    search->add_option("-M,--cutpoints", M, "cutpoint budget")->capture_default_str();
    search->add_option("--sample-cap", sample_cap, "per-segment sample cap")
        ->capture_default_str();
    search->add_option("-o,--out", out_path, "output LUT path")->capture_default_str();

    auto* build = app.add_subcommand("build", "build a LUT from the published endpoints");
    build->add_option("--op", op_name, "operator name")->required();
    build->add_option("-o,--out", out_path, "output LUT path")->capture_default_str();

    auto* evalc = app.add_subcommand("eval", "evaluate inputs against a LUT file");
    evalc->add_option("--lut", lut_path, "LUT file")->required();
    evalc->add_flag("--fp16-steps", fp16_steps, "round every intermediate to FP16");
    evalc->add_option("inputs", inputs, "hex FP16 codes (0x3C00) or decimals")->required();

    auto* sweepc = app.add_subcommand("sweep", "error sweep of a LUT over a grid");
    sweepc->add_option("--lut", lut_path, "LUT file")->required();
    add_grid_options(sweepc, gopts);
    sweepc->add_flag("--fp16-steps", fp16_steps, "round every intermediate to FP16");
    sweepc->add_flag("--points", points, "per-point CSV instead of aggregates");

    auto* comparec = app.add_subcommand("compare", "rank table layouts by sweep error");
    comparec->add_option("--op", op_name, "operator name")->required();
    add_grid_options(comparec, gopts);
    comparec->add_option("--sample-cap", sample_cap, "per-segment sample cap")
        ->capture_default_str();

    auto* tracec = app.add_subcommand("trace", "dump the 4 pipeline stage records");
    tracec->add_option("--lut", lut_path, "LUT file")->required();
    tracec->add_option("x", x_token, "input (hex code or decimal)")->required();

    auto* verify = app.add_subcommand("verify-appendix",
                                      "check the published endpoint tables");
    verify->add_option("--stride", gopts.stride, "grid stride for the cost comparison")
        ->capture_default_str();
    verify->add_option("--sample-cap", sample_cap, "per-segment sample cap")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (search->parsed()) return cmd_search(op_name, gopts, M, sample_cap, out_path);
        if (build->parsed()) return cmd_build(op_name, out_path);
        if (evalc->parsed()) return cmd_eval(lut_path, inputs, fp16_steps);
        if (sweepc->parsed()) return cmd_sweep(lut_path, gopts, fp16_steps, points);
        if (comparec->parsed()) return cmd_compare(op_name, gopts, sample_cap);
        if (tracec->parsed()) return cmd_trace(lut_path, x_token);
        if (verify->parsed()) return cmd_verify_appendix(gopts.stride, sample_cap);
    } catch (const nli::UnknownOperatorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nli::LutFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const nli::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
