#pragma once

#include "fbra/model.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace fbra {

/// Stationary law of queue 1 when queue 2 always contends.
///
/// Level k carries pi_k (first-transmission phase) and eps_k (retransmission
/// phase): pi_k = rho^k pi0, eps_0 = 0, eps_k = rho^(k-1) eps1.
struct Ds1SteadyState {
    double rho = 0.0;
    double pi0 = 0.0;
    double eps1 = 0.0;

    [[nodiscard]] double pi(std::size_t k) const noexcept;
    [[nodiscard]] double eps(std::size_t k) const noexcept;
    /// Analytic sum over all levels; equals 1 up to rounding.
    [[nodiscard]] double total_mass() const noexcept;
};

/// Both queues saturated: two-state phase chains and the resulting rates.
struct Ds3SteadyState {
    double pi_f = 0.0;  // queue 1 first-transmission == queue 2 ON
    double pi_r = 0.0;  // queue 1 retransmission == queue 2 OFF
    double mu1 = 0.0;
    double mu2 = 0.0;
};

enum class Constraint : std::uint8_t {
    None,
    Lemma1Lambda1,  // l1 < p1 / (1 + p1 p2)
    Lemma1Lambda2,  // l2 < p2 (1 - l1 - l1 p2)
    Lemma2Lambda1,  // l1 < p1 (1 - p1 - l2 p1) / (1 - p1)
    Lemma2Lambda2,  // l2 < p2 (1 - p1) / (1 + p1 p2)
};

std::string_view to_string(Constraint c) noexcept;

/// Equality on any bound counts as unstable. For the union predicate
/// `binding` is the lemma-1 failure and `secondary` the lemma-2 failure.
struct RegionVerdict {
    bool stable = false;
    Constraint binding = Constraint::None;
    Constraint secondary = Constraint::None;
};

// Queue 1 with queue 2 saturated.
[[nodiscard]] double ds1_rho(const AccessProbabilities& p, double l1);
[[nodiscard]] Ds1SteadyState ds1_steady_state(const AccessProbabilities& p, double l1);
[[nodiscard]] double ds1_service_rate_q2(const AccessProbabilities& p, double l1);

// Bounds appearing in the region predicates, usable on their own.
[[nodiscard]] double lemma1_lambda1_bound(const AccessProbabilities& p) noexcept;
[[nodiscard]] double lemma1_lambda2_bound(const AccessProbabilities& p, double l1) noexcept;
[[nodiscard]] double lemma2_lambda2_bound(const AccessProbabilities& p) noexcept;
/// Throws DegenerateParameter at p1 = 1, where the fraction is singular.
[[nodiscard]] double lemma2_lambda1_bound(const AccessProbabilities& p, double l2);

[[nodiscard]] RegionVerdict lemma1_contains(const AccessProbabilities& p, const ArrivalRates& l) noexcept;
[[nodiscard]] RegionVerdict lemma2_contains(const AccessProbabilities& p, const ArrivalRates& l) noexcept;
[[nodiscard]] RegionVerdict lemma3_contains(const AccessProbabilities& p, const ArrivalRates& l) noexcept;

/// Supremum of the l2 values admitted by `lemma3_contains` for fixed p and
/// l1 (0 when none). The admitted set is the open interval (0, sup).
[[nodiscard]] double lemma3_lambda2_supremum(const AccessProbabilities& p, double l1) noexcept;
/// Same restricted to the lemma-2 clause.
[[nodiscard]] double lemma2_lambda2_supremum(const AccessProbabilities& p, double l1) noexcept;

[[nodiscard]] Ds3SteadyState ds3_steady_state(const AccessProbabilities& p) noexcept;

/// Outer boundary of the union of all per-p regions (queue 1 at p1 = 1).
[[nodiscard]] double theorem1_boundary(double l1);
/// Maximizer of the lemma-1 l2 bound at p1 = 1, clamped to 1.
[[nodiscard]] double optimal_p2(double l1);
[[nodiscard]] double ra_boundary(double l1);
[[nodiscard]] double td_boundary(double l1);

enum class Scheme : std::uint8_t { Priority, RA, TD };
[[nodiscard]] double boundary(Scheme scheme, double l1);
std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view text);

/// Residuals of the four hand-written balance equations of the queue-1 chain
/// (around 1_R, 0_F, 1_F and 2_R) evaluated at the closed form. Test support.
[[nodiscard]] std::vector<double> ds1_balance_residuals(const AccessProbabilities& p, double l1);

}  // namespace fbra
