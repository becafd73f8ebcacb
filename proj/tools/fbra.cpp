// Command-line front end. Exit codes: 0 success, 1 usage error,
// 2 verification failure, 3 degenerate or unstable parameters.

#include "fbra/error.hpp"
#include "fbra/io.hpp"
#include "fbra/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitRejected = 3;

struct Common {
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", c.out, "Output path (default stdout)");
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw fbra::Error(fbra::ErrorKind::InvalidArgument, "cannot open output file " + c.out);
    f << text;
}

int exit_code_for(fbra::ErrorKind kind) {
    switch (kind) {
        case fbra::ErrorKind::InvalidArgument: return kExitUsage;
        case fbra::ErrorKind::DegenerateParameter:
        case fbra::ErrorKind::Unstable:
        case fbra::ErrorKind::NoConvergence:
        case fbra::ErrorKind::SingularBlock:
        case fbra::ErrorKind::SingularSystem: return kExitRejected;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability regions of two queues under random access with feedback priority"};
    app.require_subcommand(1);

    // boundary
    Common boundary_io;
    std::string scheme = "priority";
    double boundary_step = 0.001;
    auto* boundary = app.add_subcommand("boundary", "Stability-region boundary lambda2(lambda1) of a scheme");
    boundary->add_option("--scheme", scheme, "priority | ra | td")->check(CLI::IsMember({"priority", "ra", "td"}));
    boundary->add_option("--step", boundary_step, "lambda1 grid step in (0, 0.1]");
    add_common(boundary, boundary_io);

    // region
    Common region_io;
    double region_p1 = 0.5, region_p2 = 0.5, region_step = 0.01;
    auto* region = app.add_subcommand("region", "Union-region membership for fixed access probabilities");
    region->add_option("--p1", region_p1)->required();
    region->add_option("--p2", region_p2)->required();
    region->add_option("--lambda-step", region_step, "lambda grid step in (0, 0.1]");
    add_common(region, region_io);

    // sweep
    Common sweep_io;
    double sweep_p_step = 0.01, sweep_l_step = 0.005;
    bool sweep_points = false;
    auto* sweep = app.add_subcommand("sweep", "Numeric envelope of the union of per-p regions");
    sweep->add_option("--p-step", sweep_p_step, "access-probability grid step in (0, 0.1]");
    sweep->add_option("--lambda-step", sweep_l_step, "lambda grid step in (0, 0.1]");
    sweep->add_flag("--points", sweep_points, "Emit the (lambda1, lambda2) point cloud instead of envelopes");
    add_common(sweep, sweep_io);

    // simulate
    Common sim_io;
    std::string sim_kind = "feedback", sim_mode = "none";
    double sim_p1 = 0.5, sim_p2 = 0.5, sim_l1 = 0.1, sim_l2 = 0.1;
    std::uint64_t sim_slots = 1'000'000, sim_seed = fbra::kDefaultSeed;
    std::optional<std::uint64_t> sim_warmup;
    std::uint32_t sim_batches = 100;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo slot simulation");
    simulate->add_option("--kind", sim_kind, "feedback | conventional")
        ->check(CLI::IsMember({"feedback", "conventional"}));
    simulate->add_option("--mode", sim_mode, "none | ds1 | ds2 | ds3")
        ->check(CLI::IsMember({"none", "ds1", "ds2", "ds3"}));
    simulate->add_option("--p1", sim_p1);
    simulate->add_option("--p2", sim_p2);
    simulate->add_option("--l1", sim_l1);
    simulate->add_option("--l2", sim_l2);
    simulate->add_option("--slots", sim_slots, "Horizon in slots");
    simulate->add_option("--warmup", sim_warmup, "Warmup slots (default max(1%, min(1e4, 10%)))");
    simulate->add_option("--seed", sim_seed);
    simulate->add_option("--batches", sim_batches, "Batch count for standard errors");
    add_common(simulate, sim_io);

    // analyze qbd
    Common qbd_io;
    double qbd_p1 = 0.5, qbd_p2 = 0.5, qbd_l2 = 0.1;
    auto* analyze = app.add_subcommand("analyze", "Analytic reports");
    analyze->require_subcommand(1);
    auto* qbd = analyze->add_subcommand("qbd", "Rate matrix, spectral radius and service rate of queue 1");
    qbd->add_option("--p1", qbd_p1)->required();
    qbd->add_option("--p2", qbd_p2)->required();
    qbd->add_option("--l2", qbd_l2)->required();
    add_common(qbd, qbd_io);

    // verify
    Common verify_io;
    std::string verify_suite = "all";
    std::uint64_t verify_seed = fbra::kDefaultSeed;
    auto* verify = app.add_subcommand("verify", "Run invariant suites");
    verify->add_option("--suite", verify_suite, "ds1 | qbd | ds3 | containment | all")
        ->check(CLI::IsMember({"ds1", "qbd", "ds3", "containment", "all"}));
    verify->add_option("--seed", verify_seed);
    add_common(verify, verify_io);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        using namespace fbra;
        if (*boundary) {
            emit(boundary_io,
                 render(boundary_table(parse_scheme(scheme), boundary_step), parse_format(boundary_io.format)));
        } else if (*region) {
            emit(region_io,
                 render(region_table(AccessProbabilities(region_p1, region_p2), region_step),
                        parse_format(region_io.format)));
        } else if (*sweep) {
            const auto data = fbra::sweep(sweep_p_step, sweep_l_step, sweep_points);
            const auto table = sweep_points ? sweep_points_table(data) : sweep_table(data);
            emit(sweep_io, render(table, parse_format(sweep_io.format)));
        } else if (*simulate) {
            SimulationConfig cfg;
            cfg.kind = parse_protocol_kind(sim_kind);
            cfg.mode = parse_dominance_mode(sim_mode);
            cfg.p = AccessProbabilities(sim_p1, sim_p2);
            cfg.l = ArrivalRates(sim_l1, sim_l2);
            cfg.horizon = sim_slots;
            cfg.warmup = sim_warmup;
            cfg.seed = sim_seed;
            cfg.batches = sim_batches;
            emit(sim_io, render(simulation_table(run(cfg)), parse_format(sim_io.format)));
        } else if (*analyze) {
            const auto report = analyze_qbd(AccessProbabilities(qbd_p1, qbd_p2), qbd_l2);
            emit(qbd_io, render(qbd_table(report), parse_format(qbd_io.format)));
            if (!report.stable) {
                std::cerr << "rejected: " << report.diagnostic << '\n';
                return kExitRejected;
            }
        } else if (*verify) {
            const auto report = run_verify(parse_verify_suite(verify_suite), verify_seed);
            emit(verify_io, render(verify_table(report), parse_format(verify_io.format)));
            if (const auto* bad = report.first_failure()) {
                std::cerr << "FAIL " << bad->suite << "/" << bad->name << ": value " << format_number(bad->value)
                          << " (threshold " << format_number(bad->threshold) << ") " << bad->detail << '\n';
                return kExitVerify;
            }
            std::cerr << "PASS " << report.checks.size() << " checks\n";
        }
    } catch (const fbra::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}
