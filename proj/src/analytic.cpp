#include "fbra/analytic.hpp"

#include "fbra/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fbra {

namespace {

void require_rate(double l, const char* name) {
    if (!std::isfinite(l) || l < 0.0 || l >= 1.0) {
        raise(ErrorKind::InvalidArgument, std::string(name) + " must lie in [0,1), got " + std::to_string(l));
    }
}

void require_grid_rate(double l, const char* name) {
    if (!std::isfinite(l) || l < 0.0 || l > 1.0) {
        raise(ErrorKind::InvalidArgument, std::string(name) + " must lie in [0,1], got " + std::to_string(l));
    }
}

double sq(double x) { return x * x; }

}  // namespace

double Ds1SteadyState::pi(std::size_t k) const noexcept {
    return pi0 * std::pow(rho, static_cast<double>(k));
}

double Ds1SteadyState::eps(std::size_t k) const noexcept {
    if (k == 0) return 0.0;
    return eps1 * std::pow(rho, static_cast<double>(k - 1));
}

double Ds1SteadyState::total_mass() const noexcept { return (pi0 + eps1) / (1.0 - rho); }

double ds1_rho(const AccessProbabilities& p, double l1) {
    require_rate(l1, "lambda1");
    const double p1 = p.p1();
    const double p2 = p.p2();
    if (p1 == 0.0) raise(ErrorKind::DegenerateParameter, "rho undefined for p1 = 0");
    if (l1 * p2 == 1.0) raise(ErrorKind::DegenerateParameter, "rho undefined for lambda1 * p2 = 1");
    return l1 * (1.0 - p1 + l1 * p1 * p2) / (p1 * (1.0 - l1) * (1.0 - l1 * p2));
}

Ds1SteadyState ds1_steady_state(const AccessProbabilities& p, double l1) {
    const double rho = ds1_rho(p, l1);
    if (rho >= 1.0) raise(ErrorKind::Unstable, "queue 1 unstable with queue 2 saturated (rho >= 1)");
    const double p1 = p.p1();
    const double p2 = p.p2();
    Ds1SteadyState s;
    s.rho = rho;
    s.pi0 = (p1 - l1 * (1.0 + p1 * p2)) / (p1 * (1.0 - l1));
    s.eps1 = l1 * p2 / (1.0 - l1 * p2) * s.pi0;
    return s;
}

double ds1_service_rate_q2(const AccessProbabilities& p, double l1) {
    if (ds1_rho(p, l1) >= 1.0) raise(ErrorKind::Unstable, "queue 1 unstable with queue 2 saturated (rho >= 1)");
    return p.p2() * (1.0 - l1 - l1 * p.p2());
}

std::vector<double> ds1_balance_residuals(const AccessProbabilities& p, double l1) {
    const auto s = ds1_steady_state(p, l1);
    const double p1 = p.p1();
    const double p2 = p.p2();
    const double pi0 = s.pi(0), pi1 = s.pi(1), pi2 = s.pi(2);
    const double e1 = s.eps(1), e2 = s.eps(2);
    return {
        e1 - (l1 * p1 * p2 * pi0 + (1.0 - l1) * p1 * p2 * pi1),
        (l1 * p1 * p2 + l1 * (1.0 - p1)) * pi0 - ((1.0 - l1) * e1 + (1.0 - l1) * p1 * (1.0 - p2) * pi1),
        (1.0 - l1 * p1 * (1.0 - p2) - (1.0 - l1) * (1.0 - p1)) * pi1 -
            (l1 * (1.0 - p1) * pi0 + l1 * e1 + (1.0 - l1) * e2 + (1.0 - l1) * p1 * (1.0 - p2) * pi2),
        e2 - (l1 * p1 * p2 * pi1 + (1.0 - l1) * p1 * p2 * pi2),
    };
}

double lemma1_lambda1_bound(const AccessProbabilities& p) noexcept {
    return p.p1() / (1.0 + p.p1() * p.p2());
}

double lemma1_lambda2_bound(const AccessProbabilities& p, double l1) noexcept {
    return p.p2() * (1.0 - l1 - l1 * p.p2());
}

double lemma2_lambda2_bound(const AccessProbabilities& p) noexcept {
    return p.p2() * (1.0 - p.p1()) / (1.0 + p.p1() * p.p2());
}

double lemma2_lambda1_bound(const AccessProbabilities& p, double l2) {
    const double p1 = p.p1();
    if (p1 == 1.0) raise(ErrorKind::DegenerateParameter, "queue-1 bound of the second region is singular at p1 = 1");
    return p1 * (1.0 - p1 - l2 * p1) / (1.0 - p1);
}

RegionVerdict lemma1_contains(const AccessProbabilities& p, const ArrivalRates& l) noexcept {
    if (!(l.l1() < lemma1_lambda1_bound(p))) return {false, Constraint::Lemma1Lambda1};
    if (!(l.l2() < lemma1_lambda2_bound(p, l.l1()))) return {false, Constraint::Lemma1Lambda2};
    return {true};
}

RegionVerdict lemma2_contains(const AccessProbabilities& p, const ArrivalRates& l) noexcept {
    // At p1 = 1 the queue-2 bound is zero, so the region is empty and the
    // singular queue-1 bound is never consulted.
    if (!(l.l2() < lemma2_lambda2_bound(p))) return {false, Constraint::Lemma2Lambda2};
    const double p1 = p.p1();
    if (!(l.l1() < p1 * (1.0 - p1 - l.l2() * p1) / (1.0 - p1))) return {false, Constraint::Lemma2Lambda1};
    return {true};
}

RegionVerdict lemma3_contains(const AccessProbabilities& p, const ArrivalRates& l) noexcept {
    const auto first = lemma1_contains(p, l);
    if (first.stable) return first;
    const auto second = lemma2_contains(p, l);
    if (second.stable) return second;
    return {false, first.binding, second.binding};
}

double lemma2_lambda2_supremum(const AccessProbabilities& p, double l1) noexcept {
    const double p1 = p.p1();
    if (p1 == 0.0 || p1 == 1.0) return 0.0;
    // l1 < p1(1 - p1 - l2 p1)/(1 - p1)  <=>  l2 < (1 - p1)(p1 - l1)/p1^2
    const double from_queue1 = (1.0 - p1) * (p1 - l1) / sq(p1);
    return std::max(0.0, std::min(lemma2_lambda2_bound(p), from_queue1));
}

double lemma3_lambda2_supremum(const AccessProbabilities& p, double l1) noexcept {
    double sup = lemma2_lambda2_supremum(p, l1);
    if (l1 < lemma1_lambda1_bound(p)) sup = std::max(sup, lemma1_lambda2_bound(p, l1));
    return std::max(0.0, sup);
}

Ds3SteadyState ds3_steady_state(const AccessProbabilities& p) noexcept {
    const double p1 = p.p1();
    const double p2 = p.p2();
    const double denom = 1.0 + p1 * p2;
    Ds3SteadyState s;
    s.pi_f = 1.0 / denom;
    s.pi_r = p1 * p2 / denom;
    s.mu1 = p1 / denom;
    s.mu2 = p2 * (1.0 - p1) / denom;
    return s;
}

double theorem1_boundary(double l1) {
    require_grid_rate(l1, "lambda1");
    if (l1 <= 1.0 / 3.0) return 1.0 - 2.0 * l1;
    return sq(1.0 - l1) / (4.0 * l1);
}

double optimal_p2(double l1) {
    require_grid_rate(l1, "lambda1");
    if (l1 == 0.0) raise(ErrorKind::DegenerateParameter, "optimal p2 undefined at lambda1 = 0");
    return std::min(1.0, (1.0 - l1) / (2.0 * l1));
}

double ra_boundary(double l1) {
    require_grid_rate(l1, "lambda1");
    return sq(1.0 - std::sqrt(l1));
}

double td_boundary(double l1) {
    require_grid_rate(l1, "lambda1");
    return 1.0 - l1;
}

double boundary(Scheme scheme, double l1) {
    switch (scheme) {
        case Scheme::Priority: return theorem1_boundary(l1);
        case Scheme::RA: return ra_boundary(l1);
        case Scheme::TD: return td_boundary(l1);
    }
    return 0.0;
}

std::string_view to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::Priority: return "priority";
        case Scheme::RA: return "ra";
        case Scheme::TD: return "td";
    }
    return "?";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "priority") return Scheme::Priority;
    if (text == "ra") return Scheme::RA;
    if (text == "td") return Scheme::TD;
    raise(ErrorKind::InvalidArgument, "unknown scheme '" + std::string(text) + "'");
}

std::string_view to_string(Constraint c) noexcept {
    switch (c) {
        case Constraint::None: return "none";
        case Constraint::Lemma1Lambda1: return "lemma1_lambda1";
        case Constraint::Lemma1Lambda2: return "lemma1_lambda2";
        case Constraint::Lemma2Lambda1: return "lemma2_lambda1";
        case Constraint::Lemma2Lambda2: return "lemma2_lambda2";
    }
    return "?";
}

}  // namespace fbra
