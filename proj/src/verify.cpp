#include "fbra/verify.hpp"

#include "fbra/error.hpp"
#include "fbra/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fbra {

VerifySuite parse_verify_suite(std::string_view text) {
    if (text == "ds1") return VerifySuite::DS1;
    if (text == "qbd") return VerifySuite::QBD;
    if (text == "ds3") return VerifySuite::DS3;
    if (text == "containment") return VerifySuite::Containment;
    if (text == "all") return VerifySuite::All;
    raise(ErrorKind::InvalidArgument, "unknown suite '" + std::string(text) + "'");
}

std::string_view to_string(VerifySuite suite) noexcept {
    switch (suite) {
        case VerifySuite::DS1: return "ds1";
        case VerifySuite::QBD: return "qbd";
        case VerifySuite::DS3: return "ds3";
        case VerifySuite::Containment: return "containment";
        case VerifySuite::All: return "all";
    }
    return "?";
}

bool VerifyReport::passed() const noexcept { return first_failure() == nullptr; }

const CheckResult* VerifyReport::first_failure() const noexcept {
    for (const auto& c : checks) {
        if (!c.pass) return &c;
    }
    return nullptr;
}

namespace {

class Recorder {
public:
    Recorder(VerifyReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

    void below(std::string name, double value, double threshold, std::string detail = {}) {
        report_.checks.push_back({suite_, std::move(name), value, threshold,
                                  std::isfinite(value) && value < threshold, std::move(detail)});
    }
    void failures(std::string name, std::size_t count, std::string detail = {}) {
        below(std::move(name), static_cast<double>(count), 0.5, std::move(detail));
    }

private:
    VerifyReport& report_;
    std::string suite_;
};

std::string fmt(double x) { return format_number(x); }

/// 0.5 * sum |analytic - oracle| over the truncated states plus half the
/// analytic mass beyond the truncation.
double ds1_total_variation(const AccessProbabilities& p, double l1, std::size_t K) {
    const auto exact = ds1_steady_state(p, l1);
    const auto oracle = stationary(build_chain(DominantSystem::DS1, p, l1, K));
    double tv = 0.0;
    double inside = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        tv += std::abs(exact.pi(k) - oracle.at(k, Phase::Normal));
        tv += std::abs(exact.eps(k) - oracle.at(k, Phase::Backoff));
        inside += exact.pi(k) + exact.eps(k);
    }
    return 0.5 * (tv + std::max(0.0, 1.0 - inside));
}

double ds2_total_variation(const AccessProbabilities& p, double l2, std::size_t K) {
    const auto exact = ds2_stationary(p, l2, K);
    const auto oracle = stationary(build_chain(DominantSystem::DS2, p, l2, K));
    double tv = 0.0;
    double inside = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        tv += std::abs(exact.levels[k][0] - oracle.at(k, Phase::Normal));
        tv += std::abs(exact.levels[k][1] - oracle.at(k, Phase::Backoff));
        inside += exact.levels[k][0] + exact.levels[k][1];
    }
    return 0.5 * (tv + std::max(0.0, 1.0 - inside));
}

double z_score(double estimate, double expected, double std_error) {
    if (std_error <= 0.0) return estimate == expected ? 0.0 : INFINITY;
    return std::abs(estimate - expected) / std_error;
}

SimulationMetrics simulate(DominanceMode mode, const AccessProbabilities& p, const ArrivalRates& l,
                           std::uint64_t seed, std::uint64_t slots = 1'000'000) {
    SimulationConfig cfg;
    cfg.mode = mode;
    cfg.p = p;
    cfg.l = l;
    cfg.horizon = slots;
    cfg.seed = seed;
    return run(cfg);
}

void suite_ds1(VerifyReport& report, std::uint64_t seed) {
    Recorder rec(report, "ds1");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double worst_balance = 0.0;
    double worst_mass = 0.0;
    for (int n = 0; n < 200;) {
        const AccessProbabilities p(0.05 + 0.95 * unit(gen), unit(gen));
        const double l1 = unit(gen) * lemma1_lambda1_bound(p);
        if (!(ds1_rho(p, l1) < 0.99)) continue;
        for (double r : ds1_balance_residuals(p, l1)) worst_balance = std::max(worst_balance, std::abs(r));
        worst_mass = std::max(worst_mass, std::abs(ds1_steady_state(p, l1).total_mass() - 1.0));
        ++n;
    }
    rec.below("balance_residual", worst_balance, 1e-12, "200 random stable points");
    rec.below("geometric_mass", worst_mass, 1e-12);

    double worst_tv = 0.0;
    for (int n = 0; n < 5;) {
        const AccessProbabilities p(0.05 + 0.95 * unit(gen), unit(gen));
        const double l1 = unit(gen) * lemma1_lambda1_bound(p);
        if (!(ds1_rho(p, l1) <= 0.8)) continue;
        worst_tv = std::max(worst_tv, ds1_total_variation(p, l1, 200));
        ++n;
    }
    rec.below("oracle_total_variation", worst_tv, 1e-8, "K=200, 5 points with rho <= 0.8");

    const AccessProbabilities p(0.5, 0.5);
    const auto m = simulate(DominanceMode::DS1, p, ArrivalRates(0.2, 0.1), seed);
    const double expected = ds1_service_rate_q2(p, 0.2);
    rec.below("service_rate_q2_z", z_score(m.queues[1].empirical_mu, expected, m.queues[1].mu_std_error), 3.0,
              "empirical " + fmt(m.queues[1].empirical_mu) + " vs " + fmt(expected));
}

void suite_qbd(VerifyReport& report) {
    Recorder rec(report, "qbd");
    double worst_residual = 0.0;
    double worst_solver = 0.0;
    double worst_sp = 0.0;
    double worst_norm = 0.0;
    double worst_cut = 0.0;
    double worst_mu = 0.0;
    std::size_t equivalence_failures = 0;
    std::size_t points = 0;

    for (int i1 = 1; i1 <= 19; ++i1) {
        for (int i2 = 1; i2 <= 20; ++i2) {
            const AccessProbabilities p(0.05 * i1, 0.05 * i2);
            const double bound = lemma2_lambda2_bound(p);
            for (int j = 1; j <= 19; ++j) {
                const double l2 = 0.05 * j;
                const Mat2 r = closed_form_R(p, l2);
                const double sp = spectral_radius(r);
                if (std::abs(l2 - bound) > 1e-9 && ((sp < 1.0) != (l2 < bound))) ++equivalence_failures;
                if (!(l2 < bound - 1e-9)) continue;
                ++points;
                const auto blocks = qbd_blocks(p, l2);
                worst_residual = std::max(worst_residual, rate_equation_residual(blocks, r).max_abs());
                worst_solver = std::max(worst_solver, (solve_rate_matrix(blocks).r - r).max_abs());
                worst_sp = std::max(worst_sp, std::abs(sp - closed_form_sp(p, l2)));
                const auto st = ds2_stationary(p, l2, 50);
                worst_norm = std::max(worst_norm, std::abs(st.total_mass() - 1.0));
                for (double c : level_cut_imbalance(blocks, st.levels)) worst_cut = std::max(worst_cut, std::abs(c));
                worst_mu = std::max(worst_mu,
                                    std::abs(ds2_service_rate_q1(p, l2) - ds2_service_rate_q1_series(p, l2)));
            }
        }
    }
    const std::string grid = std::to_string(points) + " grid points, step 0.05";
    rec.below("rate_equation_residual", worst_residual, 1e-10, grid);
    rec.below("solver_vs_closed_form", worst_solver, 1e-8, grid);
    rec.below("sp_eigen_vs_closed_form", worst_sp, 1e-10, grid);
    rec.failures("stability_equivalence", equivalence_failures, "sp(R)<1 iff lambda2 below queue-2 bound");
    rec.below("normalization", worst_norm, 1e-10);
    rec.below("level_cut_balance", worst_cut, 1e-10, "levels 0..50");
    rec.below("mu1_closed_vs_series", worst_mu, 1e-10);

    const double witness = spectral_radius(closed_form_R(AccessProbabilities(0.5, 0.5), 0.2));
    rec.below("boundary_witness", std::abs(witness - 1.0), 1e-9, "sp at (0.5,0.5,0.2) = " + fmt(witness));

    rec.below("oracle_total_variation", ds2_total_variation(AccessProbabilities(0.5, 0.5), 0.1, 200), 1e-8,
              "K=200 at (0.5,0.5,0.1)");
}

void suite_ds3(VerifyReport& report, std::uint64_t seed) {
    Recorder rec(report, "ds3");
    const std::vector<AccessProbabilities> points{{0.5, 0.5}, {0.9, 0.7}, {0.3, 0.8}};
    for (const auto& p : points) {
        const auto exact = ds3_steady_state(p);
        const auto m = simulate(DominanceMode::DS3, p, ArrivalRates(0.1, 0.1), seed);
        const std::string at = " at p=(" + fmt(p.p1()) + "," + fmt(p.p2()) + ")";
        rec.below("backoff_occupancy_z" + at, z_score(m.backoff_occupancy, exact.pi_r, m.backoff_std_error), 3.0,
                  "empirical " + fmt(m.backoff_occupancy) + " vs " + fmt(exact.pi_r));
        rec.below("mu1_z" + at, z_score(m.queues[0].empirical_mu, exact.mu1, m.queues[0].mu_std_error), 3.0);
        rec.below("mu2_z" + at, z_score(m.queues[1].empirical_mu, exact.mu2, m.queues[1].mu_std_error), 3.0);
    }
}

void suite_containment(VerifyReport& report, std::uint64_t seed) {
    Recorder rec(report, "containment");

    std::size_t below_ra = 0;
    std::size_t above_td = 0;
    for (int i = 1; i < 1000; ++i) {
        const double l1 = 0.001 * i;
        if (!(theorem1_boundary(l1) > ra_boundary(l1))) ++below_ra;
        if (!(theorem1_boundary(l1) <= td_boundary(l1))) ++above_td;
    }
    rec.failures("priority_gt_ra", below_ra, "lambda1 grid 0.001, open interval");
    rec.failures("priority_le_td", above_td, "lambda1 grid 0.001");

    const auto data = sweep();
    const auto cmp = compare_envelopes(data, 0.02, 0.98);
    rec.below("numeric_vs_theorem1", cmp.max_dev_numeric_theorem, 0.02,
              "worst at lambda1 = " + fmt(cmp.argmax_dev_lambda1));
    rec.failures("sweep_monotone", cmp.monotone ? 0 : 1);
    rec.failures("sweep_sandwich", (cmp.ra_lt_priority_inside && cmp.priority_le_td && cmp.numeric_le_td) ? 0 : 1);
    const double knee_err = cmp.knee_lambda1 ? std::abs(*cmp.knee_lambda1 - 1.0 / 3.0) : INFINITY;
    rec.below("knee_location", knee_err, 2.0 * data.lambda_step + 1e-12);

    std::size_t not_stable = 0;
    std::ostringstream detail;
    for (double l1 : {0.05, 0.15, 0.25, 0.35, 0.45}) {
        const double l2 = theorem1_boundary(l1) - 0.02;
        SimulationConfig cfg;
        cfg.p = AccessProbabilities(1.0, optimal_p2(l1));
        cfg.l = ArrivalRates(l1, l2);
        cfg.seed = seed;
        const auto m = run(cfg);
        const bool ok = m.queues[0].verdict == Verdict::Stable && m.queues[1].verdict == Verdict::Stable;
        if (!ok) ++not_stable;
        detail << "(" << fmt(l1) << "," << fmt(l2) << "):" << (ok ? "stable" : "not-stable") << " ";
    }
    rec.failures("simulated_containment", not_stable, detail.str());
}

}  // namespace

VerifyReport run_verify(VerifySuite suite, std::uint64_t seed) {
    VerifyReport report;
    const bool all = suite == VerifySuite::All;
    if (all || suite == VerifySuite::DS1) suite_ds1(report, seed);
    if (all || suite == VerifySuite::QBD) suite_qbd(report);
    if (all || suite == VerifySuite::DS3) suite_ds3(report, seed);
    if (all || suite == VerifySuite::Containment) suite_containment(report, seed);
    return report;
}

Table verify_table(const VerifyReport& report) {
    Table t;
    t.columns = {"suite", "check", "value", "threshold", "pass", "detail"};
    for (const auto& c : report.checks) t.rows.push_back({c.suite, c.name, c.value, c.threshold, c.pass, c.detail});
    return t;
}

}  // namespace fbra
