#include "fbra/oracle.hpp"

#include "fbra/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace fbra {

TruncatedChain::TruncatedChain(DominantSystem system, std::size_t max_level)
    : system_(system), max_level_(max_level), matrix_(size() * size(), 0.0) {}

double TruncatedChain::stochasticity_error() const noexcept {
    double worst = 0.0;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += matrix_[i * n + j];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

TruncatedChain build_chain(DominantSystem system, const AccessProbabilities& p, double rate, std::size_t max_level,
                           ProtocolKind kind) {
    if (max_level < 2) raise(ErrorKind::InvalidArgument, "truncation level must be at least 2");
    if (!std::isfinite(rate) || rate < 0.0 || rate >= 1.0) {
        raise(ErrorKind::InvalidArgument, "arrival rate must lie in [0,1), got " + std::to_string(rate));
    }

    const bool tracks_q1 = system == DominantSystem::DS1;
    const DominanceMode mode = tracks_q1 ? DominanceMode::DS1 : DominanceMode::DS2;
    const int tracked = tracks_q1 ? 0 : 1;

    TruncatedChain chain(system, max_level);
    for (std::size_t level = 0; level <= max_level; ++level) {
        for (Phase phase : {Phase::Normal, Phase::Backoff}) {
            SystemState state;
            (tracks_q1 ? state.q1_len : state.q2_len) = level;
            state.phase = phase;
            const std::size_t from = TruncatedChain::index(level, phase);

            for (int mask = 0; mask < 16; ++mask) {
                const std::array<bool, 2> arrivals{(mask & 1) != 0, (mask & 2) != 0};
                const std::array<bool, 2> draws{(mask & 4) != 0, (mask & 8) != 0};

                // Only the tracked queue receives traffic; the other one is a
                // pure dummy sender.
                if (arrivals[1 - tracked]) continue;
                double w = arrivals[tracked] ? rate : 1.0 - rate;
                w *= draws[0] ? p.p1() : 1.0 - p.p1();
                w *= draws[1] ? p.p2() : 1.0 - p.p2();
                if (w == 0.0) continue;

                const auto res = advance_slot(state, kind, mode, p, arrivals, draws);
                const std::uint64_t next_level = tracks_q1 ? res.next.q1_len : res.next.q2_len;
                const std::size_t clamped = std::min<std::size_t>(next_level, max_level);
                chain.add(from, TruncatedChain::index(clamped, res.next.phase), w);
            }
        }
    }
    return chain;
}

StationaryDistribution stationary(const TruncatedChain& chain) {
    const auto n = static_cast<Eigen::Index>(chain.size());
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> P(
        chain.dense().data(), n, n);

    // (P^T - I) pi = 0 with the last equation swapped for sum(pi) = 1.
    Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd pi = lu.solve(b);
    if (!pi.allFinite()) raise(ErrorKind::SingularSystem, "stationary solve produced non-finite values");

    StationaryDistribution out;
    out.mass.assign(pi.data(), pi.data() + n);
    out.residual = (pi.transpose() * P - pi.transpose()).cwiseAbs().maxCoeff();
    if (!(out.residual < 1e-12)) {
        raise(ErrorKind::SingularSystem, "stationary residual " + std::to_string(out.residual) + " exceeds 1e-12");
    }
    return out;
}

}  // namespace fbra
