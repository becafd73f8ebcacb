// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "fbra/analytic.hpp"
#include "fbra/io.hpp"
#include "fbra/oracle.hpp"
#include "fbra/qbd.hpp"
#include "fbra/simulator.hpp"
#include "fbra/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace fbra;

namespace {

// Tolerances.
constexpr double kExactTol = 1e-15;
constexpr double kSweepDevTol = 0.02;
constexpr double kSweepSeconds = 30.0;
constexpr double kResidualTol = 1e-10;
constexpr double kSolverTol = 1e-8;
constexpr double kSpTol = 1e-10;
constexpr double kWitnessTol = 1e-9;
constexpr double kTvTol = 1e-8;
constexpr std::size_t kTruncation = 200;
constexpr double kZTol = 3.0;
constexpr std::uint64_t kSlots = 1'000'000;
constexpr double kDriftTol = 0.02;
constexpr double kCorrectedDriftTol = 0.01;

int failures = 0;

void report(int id, bool pass, const std::string& summary) {
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << summary << '\n';
    if (!pass) ++failures;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

SimulationConfig sim(DominanceMode mode, AccessProbabilities p, ArrivalRates l) {
    SimulationConfig cfg;
    cfg.mode = mode;
    cfg.p = p;
    cfg.l = l;
    cfg.horizon = kSlots;
    return cfg;
}

void envelope() {
    const double e1 = std::abs(theorem1_boundary(0.1) - 0.8);
    const double e2 = std::abs(theorem1_boundary(1.0 / 3.0) - 1.0 / 3.0);
    const double e3 = std::abs(theorem1_boundary(0.5) - 0.125);
    const double exact = std::max({e1, e2, e3});

    const auto t0 = std::chrono::steady_clock::now();
    const auto data = sweep(0.01, 0.005);
    const auto cmp = compare_envelopes(data, 0.02, 0.98);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    report(1, exact <= kExactTol && cmp.max_dev_numeric_theorem < kSweepDevTol && secs < kSweepSeconds,
           "closed-form error " + num(exact) + ", sweep max deviation " + num(cmp.max_dev_numeric_theorem) +
               " at lambda1=" + num(cmp.argmax_dev_lambda1) + " (< " + num(kSweepDevTol) + "), " + num(secs) + " s");
}

void qbd() {
    double residual = 0.0, solver = 0.0, sp = 0.0;
    int points = 0;
    for (int i = 1; i < 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
            const AccessProbabilities p{i * 0.05, j * 0.05};
            for (int k = 1; k < 20; ++k) {
                const double l2 = k * 0.05;
                if (!(l2 < lemma2_lambda2_bound(p) - 1e-9)) continue;
                const auto blocks = qbd_blocks(p, l2);
                const Mat2 r = closed_form_R(p, l2);
                residual = std::max(residual, rate_equation_residual(blocks, r).max_abs());
                solver = std::max(solver, (solve_rate_matrix(blocks).r - r).max_abs());
                sp = std::max(sp, std::abs(spectral_radius(r) - closed_form_sp(p, l2)));
                ++points;
            }
        }
    }
    const double witness = std::abs(spectral_radius(closed_form_R({0.5, 0.5}, 0.2)) - 1.0);
    report(2, residual < kResidualTol && solver < kSolverTol && sp < kSpTol && witness < kWitnessTol,
           std::to_string(points) + " grid points: residual " + num(residual) + ", solver gap " + num(solver) +
               ", sp gap " + num(sp) + ", witness |sp-1| " + num(witness));
}

double tv_ds1(const AccessProbabilities& p, double l1) {
    const auto d = stationary(build_chain(DominantSystem::DS1, p, l1, kTruncation));
    const auto s = ds1_steady_state(p, l1);
    double tv = 0.0;
    for (std::size_t k = 0; k <= kTruncation; ++k) {
        tv += std::abs(d.at(k, Phase::Normal) - s.pi(k)) + std::abs(d.at(k, Phase::Backoff) - s.eps(k));
    }
    return 0.5 * tv;
}

double tv_ds2(const AccessProbabilities& p, double l2) {
    const auto d = stationary(build_chain(DominantSystem::DS2, p, l2, kTruncation));
    const auto s = ds2_stationary(p, l2, kTruncation);
    double tv = 0.0;
    for (std::size_t k = 0; k <= kTruncation; ++k) {
        tv += std::abs(d.at(k, Phase::Normal) - s.levels[k][0]) + std::abs(d.at(k, Phase::Backoff) - s.levels[k][1]);
    }
    return 0.5 * tv;
}

void oracle() {
    const std::vector<std::pair<AccessProbabilities, double>> ds1 = {
        {{0.5, 0.5}, 0.2}, {{0.9, 0.3}, 0.3}, {{0.3, 0.8}, 0.1}, {{1.0, 1.0}, 0.3}, {{0.7, 0.2}, 0.4}};
    const std::vector<std::pair<AccessProbabilities, double>> ds2 = {
        {{0.5, 0.5}, 0.1}, {{0.3, 0.8}, 0.2}, {{0.2, 0.5}, 0.2}, {{0.6, 0.9}, 0.05}, {{0.1, 1.0}, 0.4}};
    double worst = 0.0, worst_ratio = 0.0;
    bool in_range = true;
    for (const auto& [p, l1] : ds1) {
        const double rho = ds1_rho(p, l1);
        in_range = in_range && rho <= 0.8;
        worst_ratio = std::max(worst_ratio, rho);
        worst = std::max(worst, tv_ds1(p, l1));
    }
    for (const auto& [p, l2] : ds2) {
        const double sp = spectral_radius(closed_form_R(p, l2));
        in_range = in_range && sp <= 0.8;
        worst_ratio = std::max(worst_ratio, sp);
        worst = std::max(worst, tv_ds2(p, l2));
    }
    report(3, in_range && worst < kTvTol,
           "10 points (max rho/sp " + num(worst_ratio) + "), K=" + std::to_string(kTruncation) +
               ", max total variation " + num(worst) + " (< " + num(kTvTol) + ")");
}

void service_laws() {
    double worst = 0.0;
    const std::vector<std::pair<AccessProbabilities, double>> ds1 = {
        {{0.5, 0.5}, 0.2}, {{0.9, 0.3}, 0.4}, {{0.3, 0.8}, 0.15}, {{1.0, 0.5}, 0.5}, {{0.7, 1.0}, 0.2}};
    for (const auto& [p, l1] : ds1) {
        const auto m = run(sim(DominanceMode::DS1, p, {l1, 0.5}));
        worst = std::max(worst, std::abs(m.queues[1].empirical_mu - ds1_service_rate_q2(p, l1)) /
                                    m.queues[1].mu_std_error);
    }
    const std::vector<std::pair<AccessProbabilities, double>> ds2 = {
        {{0.5, 0.5}, 0.1}, {{0.3, 0.8}, 0.2}, {{0.2, 0.5}, 0.3}, {{0.6, 0.9}, 0.1}, {{0.1, 1.0}, 0.5}};
    for (const auto& [p, l2] : ds2) {
        const auto m = run(sim(DominanceMode::DS2, p, {0.5, l2}));
        worst = std::max(worst, std::abs(m.queues[0].empirical_mu - ds2_service_rate_q1(p, l2)) /
                                    m.queues[0].mu_std_error);
    }
    for (const AccessProbabilities p : {AccessProbabilities{0.5, 0.5}, {0.9, 0.7}, {0.3, 0.8}, {0.2, 0.2}, {1.0, 0.4}}) {
        const auto m = run(sim(DominanceMode::DS3, p, {0.5, 0.5}));
        const double pr = p.p1() * p.p2() / (1.0 + p.p1() * p.p2());
        worst = std::max(worst, std::abs(m.backoff_occupancy - pr) / m.backoff_std_error);
    }
    report(4, worst < kZTol, "15 runs of " + std::to_string(kSlots) + " slots, max |z| " + num(worst));
}

void containment() {
    int stable = 0;
    std::string where;
    for (double l1 : {0.05, 0.15, 0.25, 0.35, 0.45}) {
        const double l2 = theorem1_boundary(l1) - 0.02;
        const bool beyond_ra = l2 > ra_boundary(l1);
        const auto m = run(sim(DominanceMode::None, {1.0, optimal_p2(l1)}, {l1, l2}));
        const bool ok = beyond_ra && m.queues[0].verdict == Verdict::Stable && m.queues[1].verdict == Verdict::Stable;
        stable += ok;
        if (!ok) where += " (" + num(l1) + "," + num(l2) + ")";
    }
    int sandwich_bad = 0;
    for (int i = 0; i <= 1000; ++i) {
        const double l1 = i / 1000.0;
        const double t = theorem1_boundary(l1);
        const bool strict = i > 0 && i < 1000;
        if (strict ? !(ra_boundary(l1) < t) : !(ra_boundary(l1) <= t)) ++sandwich_bad;
        if (!(t <= td_boundary(l1))) ++sandwich_bad;
    }
    const auto cmp = compare_envelopes(sweep());
    report(5, stable == 5 && sandwich_bad == 0 && cmp.ra_le_priority && cmp.priority_le_td && cmp.numeric_le_td,
           std::to_string(stable) + "/5 stable beyond the RA boundary" + where + ", sandwich violations " +
               std::to_string(sandwich_bad));
}

void drift() {
    // Points outside the region where the channel runs collision-free at one
    // packet per slot, which is what the lambda1 + lambda2 - 1 law presumes.
    struct Point {
        AccessProbabilities p;
        ArrivalRates l;
    };
    const Point capacity[] = {{{1.0, 0.0}, {0.99, 0.5}}, {{1.0, 0.0}, {0.995, 0.8}}, {{0.0, 1.0}, {0.4, 0.99}}};
    double worst = 0.0;
    for (const auto& pt : capacity) {
        const auto m = run(sim(DominanceMode::None, pt.p, pt.l));
        worst = std::max(worst, std::abs(m.total_drift - (pt.l.l1() + pt.l.l2() - 1.0)));
    }

    // Under contention the saturated channel carries less than one packet per
    // slot, so the drift is lambda1 + lambda2 minus the carried throughput.
    const ArrivalRates contended[] = {{0.2, 0.9}, {0.5, 0.6}, {0.9, 0.9}};
    double literal = 0.0, corrected = 0.0;
    for (const auto& l : contended) {
        const AccessProbabilities p{1.0, optimal_p2(l.l1())};
        const auto m = run(sim(DominanceMode::None, p, l));
        double carried = 0.0;
        if (l.l1() < lemma1_lambda1_bound(p)) {
            carried = l.l1() + ds1_service_rate_q2(p, l.l1());
        } else {
            const auto s = ds3_steady_state(p);
            carried = s.mu1 + s.mu2;
        }
        literal = std::max(literal, std::abs(m.total_drift - (l.l1() + l.l2() - 1.0)));
        corrected = std::max(corrected, std::abs(m.total_drift - (l.l1() + l.l2() - carried)));
    }
    report(6, worst < kDriftTol && corrected < kCorrectedDriftTol,
           "collision-free overload max |drift - (l1+l2-1)| " + num(worst) + "; contended points: literal gap " +
               num(literal) + ", gap to l1+l2-throughput " + num(corrected));
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void determinism() {
    const std::string cli = FBRA_CLI_PATH;
    bool same = true;
    std::string note;
    for (const char* format : {"csv", "json"}) {
        std::string outs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const std::string path = "acceptance_det_" + std::string(format) + std::to_string(rep) + ".out";
            const std::string cmd = "\"" + cli + "\" simulate --p1 0.6 --p2 0.4 --l1 0.2 --l2 0.15 --slots 200000" +
                                    " --seed 4242 --format " + format + " --out " + path;
            if (std::system(cmd.c_str()) != 0) note = " (command failed)";
            outs[rep] = slurp(path);
            std::remove(path.c_str());
        }
        same = same && !outs[0].empty() && outs[0] == outs[1];
    }
    report(7, same && note.empty(), std::string("repeated simulate reports byte-identical in csv and json") + note);
}

}  // namespace

int main() {
    try {
        envelope();
        qbd();
        oracle();
        service_laws();
        containment();
        drift();
        determinism();
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << '\n';
        return 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
