#include "elvis/cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "elvis/problem_io.h"
#include "elvis/solver.h"

namespace elvis::cli {

namespace {

using nlohmann::json;

struct Options {
    std::optional<double> epsilon;
    std::string input;
    std::string trace_path;
    std::string out_path;
    int samples = 0;
    unsigned threads = 0;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io::ParseError(fmt::format("cannot write '{}'", path));
    return f;
}

ElvisProblem load(const Options& opt) {
    io::ProblemFile file = io::parse_problem(io::read_text(opt.input));
    if (opt.epsilon) file.epsilon = *opt.epsilon;
    return io::build_problem(file);
}

int cmd_solve(const Options& opt, std::ostream& out) {
    const ElvisProblem problem = load(opt);
    const SolveOutput run = solve(problem);
    const SolveResult& r = run.result;

    if (!opt.trace_path.empty()) {
        std::ofstream csv = open_out(opt.trace_path);
        csv << "k,l,r,y,d,delta_lo,delta_hi\n";
        for (const TraceRow& row : run.trace) {
            csv << row.k << ',' << num(row.l) << ',' << num(row.r) << ',' << num(row.y) << ','
                << num(row.d) << ',' << num(row.delta.lo) << ',' << num(row.delta.hi) << '\n';
        }
    }

    const json record = {{"y", r.y},
                         {"time", r.time},
                         {"v0", vec_json(r.v0)},
                         {"v1", vec_json(r.v1)},
                         {"zeta0", vec_json(r.zeta0)},
                         {"zeta1", vec_json(r.zeta1)},
                         {"iterations", r.iterations},
                         {"status", r.status_label()}};
    out << record.dump(2) << '\n';
    return kExitOk;
}

int cmd_delta_curve(const Options& opt, std::ostream& out) {
    const ElvisProblem problem = load(opt);
    Bracket b = initial_bracket(problem);
    if (b.r == b.l) {
        const double seed = 0.5 * (std::abs(problem.x0.y) + std::abs(problem.x1.y));
        b.l -= seed;
        b.r += seed;
    }

    const int n = opt.samples;
    std::vector<double> ys(static_cast<std::size_t>(n));
    std::vector<DeltaInterval> ds(ys.size());
    for (int i = 0; i < n; ++i) {
        const double y = b.l + (b.r - b.l) * i / (n - 1);
        ys[static_cast<std::size_t>(i)] = y;
        ds[static_cast<std::size_t>(i)] = delta(problem, y);
    }

    std::ofstream csv = open_out(opt.out_path);
    csv << "y,delta_lo,delta_hi\n";
    for (std::size_t i = 0; i < ys.size(); ++i) {
        csv << num(ys[i]) << ',' << num(ds[i].lo) << ',' << num(ds[i].hi) << '\n';
    }

    // The residual is monotone in y, so the minimizers lie between the last
    // strictly negative sample and the first strictly positive one.
    double root_lo = ys.front();
    double root_hi = ys.back();
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ds[i].hi < 0.0) root_lo = ys[i];
    }
    for (std::size_t i = ys.size(); i-- > 0;) {
        if (ds[i].lo > 0.0) root_hi = ys[i];
    }

    const json summary = {{"samples", n},
                          {"bracket", json::array({b.l, b.r})},
                          {"bracket_expanded", b.expanded},
                          {"root_interval", json::array({root_lo, root_hi})}};
    out << summary.dump(2) << '\n';
    return kExitOk;
}

struct SweepRow {
    Vec2 x1;
    double y = std::nan("");
    double time = std::nan("");
    std::string status;
    int iterations = 0;
    bool ok = false;
};

int cmd_sweep(const Options& opt, std::ostream& out) {
    io::SweepSpec spec = io::parse_sweep(io::read_text(opt.input));
    if (opt.epsilon) spec.epsilon = *opt.epsilon;
    io::check_grid(spec.x1_grid);
    const VelocitySet F0 = VelocitySet::validate(spec.F0);
    const VelocitySet F1 = VelocitySet::validate(spec.F1);
    const io::SweepGrid& g = spec.x1_grid;

    std::vector<SweepRow> rows(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            rows[static_cast<std::size_t>(j) * g.nx + i].x1 = g.node(i, j);
        }
    }
    // Validate the endpoint invariants once, on the first node.
    check_problem(ElvisProblem{spec.x0, rows.front().x1, F0, F1, spec.epsilon, spec.max_iter});

    auto solve_node = [&](SweepRow& row) {
        try {
            const ElvisProblem problem{spec.x0, row.x1, F0, F1, spec.epsilon, spec.max_iter};
            const SolveResult r = solve(problem).result;
            row.y = r.y;
            row.time = r.time;
            row.status = r.status_label();
            row.iterations = r.iterations;
            row.ok = true;
        } catch (const SolverError& e) {
            row.status = std::string(to_string(e.code()));
        } catch (const std::exception&) {
            row.status = "Error";
        }
    };

    unsigned workers = opt.threads != 0 ? opt.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(rows.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t idx = next++; idx < rows.size(); idx = next++) solve_node(rows[idx]);
        });
    }
    pool.clear();

    std::ofstream csv = open_out(opt.out_path);
    csv << "x1x,x1y,y,time,status,iterations\n";
    std::size_t solved = 0;
    for (const SweepRow& row : rows) {
        csv << num(row.x1.x) << ',' << num(row.x1.y) << ',' << num(row.y) << ','
            << num(row.time) << ',' << row.status << ',' << row.iterations << '\n';
        solved += row.ok ? 1 : 0;
    }
    fmt::print(out, "solved {} of {} nodes\n", solved, rows.size());
    return solved > 0 ? kExitOk : kExitSolver;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
    io::ProblemFile file = io::parse_problem(io::read_text(opt.input));
    if (opt.epsilon) file.epsilon = *opt.epsilon;

    auto fail = [&](std::string_view check, std::string_view what) {
        fmt::print(out, "FAIL  {}: {}\n", check, what);
        fmt::print(err, "error: {}\n", what);
        return kExitValidation;
    };

    std::optional<VelocitySet> sets[2];
    const SetDescription* descs[2] = {&file.F0, &file.F1};
    for (int i = 0; i < 2; ++i) {
        const std::string name = fmt::format("F{}", i);
        try {
            sets[i] = VelocitySet::validate(*descs[i]);
        } catch (const GeometryError& e) {
            return fail(name, e.what());
        }
        fmt::print(out, "ok    {}: convex, bounded, origin interior\n", name);
    }
    try {
        check_problem(ElvisProblem{file.x0, file.x1, *sets[0], *sets[1], file.epsilon,
                                   file.max_iter});
    } catch (const ProblemError& e) {
        return fail("endpoints", e.what());
    }
    fmt::print(out, "ok    x0: x0_y < 0\n");
    fmt::print(out, "ok    x1: x1_y > 0\n");
    fmt::print(out, "ok    epsilon: {}\n", num(file.epsilon));
    fmt::print(out, "ok    max_iter: {}\n", file.max_iter);
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Least-time crossing of a planar interface between two convex velocity sets",
                 "elvis"};
    app.require_subcommand(1);
    Options opt;
    double epsilon = 0.0;
    auto* eps_flag = app.add_option("--epsilon", epsilon, "Residual tolerance (overrides the file)")
                         ->check(CLI::PositiveNumber);

    auto* solve_cmd = app.add_subcommand("solve", "Bisection solve of one problem file");
    solve_cmd->add_option("problem", opt.input, "Problem file")->required();
    solve_cmd->add_option("--trace", opt.trace_path, "Write the iteration trace as CSV");

    auto* curve_cmd = app.add_subcommand("delta-curve", "Sample the residual across the bracket");
    curve_cmd->add_option("problem", opt.input, "Problem file")->required();
    curve_cmd->add_option("--samples", opt.samples, "Number of abscissae")
        ->required()
        ->check(CLI::Range(2, 100000000));
    curve_cmd->add_option("--out", opt.out_path, "CSV output")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Solve over a grid of x1 targets");
    sweep_cmd->add_option("spec", opt.input, "Sweep file")->required();
    sweep_cmd->add_option("--out", opt.out_path, "CSV output")->required();
    sweep_cmd->add_option("--threads", opt.threads, "Worker threads (0 = hardware)");

    auto* validate_cmd = app.add_subcommand("validate", "Check a problem file");
    validate_cmd->add_option("problem", opt.input, "Problem file")->required();

    for (auto* sub : {solve_cmd, curve_cmd, sweep_cmd, validate_cmd}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }
    if (*eps_flag) opt.epsilon = epsilon;

    try {
        if (*solve_cmd) return cmd_solve(opt, out);
        if (*curve_cmd) return cmd_delta_curve(opt, out);
        if (*sweep_cmd) return cmd_sweep(opt, out);
        return cmd_validate(opt, out, err);
    } catch (const io::ParseError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitParse;
    } catch (const GeometryError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitValidation;
    } catch (const ProblemError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitValidation;
    } catch (const SolverError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitSolver;
    }
}

} // namespace elvis::cli
