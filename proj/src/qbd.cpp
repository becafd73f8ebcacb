#include "fbra/qbd.hpp"

#include "fbra/analytic.hpp"
#include "fbra/error.hpp"

#include <cmath>
#include <sstream>

namespace fbra {

namespace {

void require_rate(double l, const char* name) {
    if (!std::isfinite(l) || l < 0.0 || l >= 1.0) {
        raise(ErrorKind::InvalidArgument, std::string(name) + " must lie in [0,1), got " + std::to_string(l));
    }
}

void require_regular(const AccessProbabilities& p) {
    if (p.p1() == 1.0) raise(ErrorKind::DegenerateParameter, "rate matrix closed form is singular at p1 = 1");
    if (p.p2() == 0.0) raise(ErrorKind::DegenerateParameter, "rate matrix closed form is singular at p2 = 0");
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

QbdBlocks qbd_blocks(const AccessProbabilities& p, double l2) {
    require_rate(l2, "lambda2");
    const double p1 = p.p1();
    const double p2 = p.p2();
    const double q = 1.0 - l2;

    QbdBlocks blk;
    // 0_OFF is never entered; its column sends it to 0_ON or, on an arrival,
    // to 1_ON (the extra edge that keeps level 0 tridiagonal).
    blk.b = Mat2::of(q + l2 * (1.0 - p1) * p2, q, 0.0, 0.0);
    blk.a0 = Mat2::of(q * (1.0 - p1) * p2, 0.0, 0.0, 0.0);
    blk.a1 = Mat2::of(l2 * p2 * (1.0 - p1) + q * (1.0 - p2), q, q * p1 * p2, 0.0);
    blk.a2 = Mat2::of(l2 * (1.0 - p2), l2, l2 * p1 * p2, 0.0);
    return blk;
}

Mat2 rate_equation_residual(const QbdBlocks& blocks, const Mat2& r) noexcept {
    return blocks.a2 + (blocks.a1 - Mat2::identity()) * r + blocks.a0 * (r * r);
}

RateSolution solve_rate_matrix(const QbdBlocks& blocks, double tol, std::uint64_t max_iter) {
    if (!(tol > 0.0)) raise(ErrorKind::InvalidArgument, "tolerance must be positive");
    const auto inv = (Mat2::identity() - blocks.a1).inverse();
    if (!inv) raise(ErrorKind::SingularBlock, "I - A1 is not invertible");

    RateSolution sol;
    Mat2 r = Mat2::zero();
    for (std::uint64_t it = 1; it <= max_iter; ++it) {
        const Mat2 next = *inv * (blocks.a2 + blocks.a0 * (r * r));
        const double change = (next - r).max_abs();
        r = next;
        if (change < tol) {
            sol.r = r;
            sol.iterations = it;
            sol.last_change = change;
            sol.residual = rate_equation_residual(blocks, r).max_abs();
            return sol;
        }
        sol.last_change = change;
    }
    raise(ErrorKind::NoConvergence, "rate matrix iteration did not converge in " + std::to_string(max_iter) +
                                         " steps; last change " + format_double(sol.last_change) + ", residual " +
                                         format_double(rate_equation_residual(blocks, r).max_abs()));
}

Mat2 closed_form_R(const AccessProbabilities& p, double l2) {
    require_rate(l2, "lambda2");
    require_regular(p);
    const double p1 = p.p1();
    const double p2 = p.p2();
    const double base = (1.0 - l2) * (1.0 - p1) * p2;
    const double lower = l2 * p1 / (1.0 - p1);
    return Mat2::of(l2 * (1.0 - p2 + p1 * p2) / base, l2 / base, lower, lower);
}

double spectral_radius(const Mat2& r) noexcept {
    const double t = r.trace();
    const double d = r.det();
    const double disc = t * t - 4.0 * d;
    if (disc < 0.0) return std::sqrt(d);  // complex pair, |lambda|^2 = det
    const double s = std::sqrt(disc);
    // Larger-magnitude root first, the other from the product to avoid cancellation.
    const double big = 0.5 * (t + (t >= 0.0 ? s : -s));
    const double small = big != 0.0 ? d / big : 0.0;
    return std::max(std::abs(big), std::abs(small));
}

double closed_form_sp(const AccessProbabilities& p, double l2) {
    require_rate(l2, "lambda2");
    require_regular(p);
    const double p1 = p.p1();
    const double p2 = p.p2();
    const double root = std::sqrt(1.0 - 2.0 * p2 + p2 * p2 + 4.0 * p1 * p2 - 2.0 * l2 * p1 * p2 -
                                  2.0 * l2 * p1 * p2 * p2 + l2 * l2 * p1 * p1 * p2 * p2);
    return l2 * (1.0 - p2 - l2 * p1 * p2 + 2.0 * p1 * p2 + root) / (2.0 * p2 * (1.0 - l2 - p1 + l2 * p1));
}

double ds2_pi0(const AccessProbabilities& p, double l2) {
    require_rate(l2, "lambda2");
    if (!(l2 < lemma2_lambda2_bound(p))) {
        raise(ErrorKind::Unstable, "queue 2 unstable with queue 1 saturated: lambda2 >= p2(1-p1)/(1+p1 p2)");
    }
    const double p1 = p.p1();
    const double p2 = p.p2();
    return (p2 - l2 - p1 * p2 - l2 * p1 * p2) / ((1.0 - l2) * (1.0 - p1) * p2);
}

double Ds2Stationary::total_mass() const {
    const auto inv = (Mat2::identity() - r).inverse();
    if (!inv) raise(ErrorKind::SingularBlock, "I - R is not invertible");
    const Vec2 v = *inv * Vec2{pi0, 0.0};
    return v[0] + v[1];
}

Ds2Stationary ds2_stationary(const AccessProbabilities& p, double l2, std::size_t max_level) {
    Ds2Stationary s;
    s.pi0 = ds2_pi0(p, l2);
    s.r = closed_form_R(p, l2);
    if (!(spectral_radius(s.r) < 1.0)) raise(ErrorKind::Unstable, "sp(R) >= 1");
    s.levels.reserve(max_level + 1);
    Vec2 v{s.pi0, 0.0};
    for (std::size_t k = 0; k <= max_level; ++k) {
        s.levels.push_back(v);
        v = s.r * v;
    }
    return s;
}

double ds2_service_rate_q1(const AccessProbabilities& p, double l2) {
    require_rate(l2, "lambda2");
    if (p.p1() == 1.0) {
        raise(ErrorKind::DegenerateParameter, "queue-1 service rate closed form is singular at p1 = 1");
    }
    (void)ds2_pi0(p, l2);  // stability gate
    return lemma2_lambda1_bound(p, l2);
}

double ds2_service_rate_q1_series(const AccessProbabilities& p, double l2) {
    const double pi0 = ds2_pi0(p, l2);
    const Mat2 r = closed_form_R(p, l2);
    const auto inv = (Mat2::identity() - r).inverse();
    if (!inv) raise(ErrorKind::SingularBlock, "I - R is not invertible");
    const double p1 = p.p1();
    const double p2 = p.p2();
    const Vec2 tail = (r * *inv) * Vec2{pi0, 0.0};
    return p1 * (1.0 - l2 * p2) * pi0 + p1 * (1.0 - p2) * tail[0] + tail[1];
}

std::vector<double> level_cut_imbalance(const QbdBlocks& blocks, const std::vector<Vec2>& levels) {
    std::vector<double> out;
    if (levels.size() < 2) return out;
    out.reserve(levels.size() - 1);
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const double up = blocks.a2.column_sum(0) * levels[k][0] + blocks.a2.column_sum(1) * levels[k][1];
        const double down =
            blocks.a0.column_sum(0) * levels[k + 1][0] + blocks.a0.column_sum(1) * levels[k + 1][1];
        out.push_back(up - down);
    }
    return out;
}

QbdReport analyze_qbd(const AccessProbabilities& p, double l2) {
    QbdReport rep;
    rep.p1 = p.p1();
    rep.p2 = p.p2();
    rep.l2 = l2;
    rep.blocks = qbd_blocks(p, l2);
    std::ostringstream diag;

    try {
        rep.r_closed = closed_form_R(p, l2);
        rep.r_closed_residual = rate_equation_residual(rep.blocks, *rep.r_closed).max_abs();
        rep.sp_eigen = spectral_radius(*rep.r_closed);
        rep.sp_closed = closed_form_sp(p, l2);
    } catch (const Error& e) {
        diag << e.what() << "; ";
    }
    try {
        rep.r_iterative = solve_rate_matrix(rep.blocks);
    } catch (const Error& e) {
        diag << e.what() << "; ";
    }
    try {
        rep.pi0 = ds2_pi0(p, l2);
        rep.mu1_closed = ds2_service_rate_q1(p, l2);
        rep.mu1_series = ds2_service_rate_q1_series(p, l2);
        const auto st = ds2_stationary(p, l2, 0);
        rep.normalization_error = std::abs(st.total_mass() - 1.0);
        rep.stable = true;
    } catch (const Error& e) {
        diag << e.what() << "; ";
    }
    rep.diagnostic = diag.str();
    if (rep.diagnostic.size() >= 2) rep.diagnostic.resize(rep.diagnostic.size() - 2);
    return rep;
}

}  // namespace fbra
