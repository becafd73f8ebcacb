#pragma once

#include "fbra/mat2.hpp"
#include "fbra/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fbra {

// Queue 2's level/phase chain when queue 1 always contends.
//
// Phase index 0 is ON (queue 2 may access the channel), index 1 is OFF
// (queue 2 backs off while queue 1 retransmits). All blocks use the column
// convention: entry (i, j) is the probability of moving from phase j of the
// source level to phase i of the destination level, so the stationary vector
// satisfies v = Phi v and every column of the assembled Phi sums to one.
//
//   b  : level 0   -> level 0
//   a0 : level k   -> level k-1   (k >= 1)
//   a1 : level k   -> level k     (k >= 1)
//   a2 : level k   -> level k+1   (k >= 0)
//
// In this orientation the level vectors obey v_k = R^k v_0 with R the
// minimal nonnegative solution of  a2 + (a1 - I) R + a0 R^2 = 0.
struct QbdBlocks {
    Mat2 b;
    Mat2 a0;
    Mat2 a1;
    Mat2 a2;
};

[[nodiscard]] QbdBlocks qbd_blocks(const AccessProbabilities& p, double l2);

/// a2 + (a1 - I) R + a0 R^2.
[[nodiscard]] Mat2 rate_equation_residual(const QbdBlocks& blocks, const Mat2& r) noexcept;

struct RateSolution {
    Mat2 r;
    std::uint64_t iterations = 0;
    double last_change = 0.0;
    double residual = 0.0;  // max-abs of rate_equation_residual
};

/// Natural fixed-point iteration R <- (I - a1)^-1 (a2 + a0 R^2) from R = 0.
/// Iterates are entrywise nondecreasing and converge to the minimal solution.
/// Throws SingularBlock when I - a1 is not invertible and NoConvergence when
/// the entrywise change is still >= tol after max_iter steps.
[[nodiscard]] RateSolution solve_rate_matrix(const QbdBlocks& blocks, double tol = 1e-12,
                                             std::uint64_t max_iter = 1'000'000);

/// Entrywise closed form; requires p1 < 1 and p2 > 0 (else DegenerateParameter).
[[nodiscard]] Mat2 closed_form_R(const AccessProbabilities& p, double l2);

/// Largest eigenvalue magnitude via the trace/determinant quadratic.
[[nodiscard]] double spectral_radius(const Mat2& r) noexcept;
/// Printed closed form of sp(R); requires p1 < 1 and p2 > 0.
[[nodiscard]] double closed_form_sp(const AccessProbabilities& p, double l2);

/// Empty-queue probability of queue 2. Throws Unstable unless
/// l2 < p2 (1 - p1) / (1 + p1 p2).
[[nodiscard]] double ds2_pi0(const AccessProbabilities& p, double l2);

struct Ds2Stationary {
    double pi0 = 0.0;
    Mat2 r;
    /// levels[k] = {pi'_k, eps'_k} = R^k {pi'_0, 0}
    std::vector<Vec2> levels;

    /// [1 1] (I - R)^-1 [pi0 0]^T
    [[nodiscard]] double total_mass() const;
};

[[nodiscard]] Ds2Stationary ds2_stationary(const AccessProbabilities& p, double l2, std::size_t max_level);

/// Queue 1's service rate with queue 1 saturated, closed form.
/// DegenerateParameter at p1 = 1; Unstable when queue 2 is unstable.
[[nodiscard]] double ds2_service_rate_q1(const AccessProbabilities& p, double l2);
/// The same rate as the level sum p1(1 - l2 p2) pi0 + [p1(1-p2) 1] R (I-R)^-1 [pi0 0]^T.
[[nodiscard]] double ds2_service_rate_q1_series(const AccessProbabilities& p, double l2);

/// Per-cut imbalance: up-flow out of level k minus down-flow out of level k+1,
/// for k = 0 .. levels.size() - 2.
[[nodiscard]] std::vector<double> level_cut_imbalance(const QbdBlocks& blocks, const std::vector<Vec2>& levels);

/// Everything the `analyze qbd` command prints. Optional fields are empty
/// when the corresponding quantity is degenerate or unstable; `diagnostic`
/// then says why.
struct QbdReport {
    double p1 = 0.0;
    double p2 = 0.0;
    double l2 = 0.0;
    QbdBlocks blocks;
    std::optional<Mat2> r_closed;
    std::optional<RateSolution> r_iterative;
    std::optional<double> sp_eigen;
    std::optional<double> sp_closed;
    std::optional<double> pi0;
    std::optional<double> mu1_closed;
    std::optional<double> mu1_series;
    std::optional<double> r_closed_residual;
    std::optional<double> normalization_error;
    bool stable = false;
    std::string diagnostic;
};

[[nodiscard]] QbdReport analyze_qbd(const AccessProbabilities& p, double l2);

}  // namespace fbra
