#pragma once

#include "fbra/model.hpp"

#include <cstddef>
#include <vector>

namespace fbra {

/// Which single-queue chain to truncate. DS1 tracks queue 1 while queue 2
/// sends dummies; DS2 tracks queue 2 while queue 1 sends dummies.
enum class DominantSystem : std::uint8_t { DS1, DS2 };

/// Finite truncation of a level/phase chain, built by enumerating every coin
/// outcome of `advance_slot` from each state.
///
/// Levels 0..max_level, two phases per level (Normal = F/ON, Backoff = R/OFF).
/// Row-stochastic: transition(i, j) = P(i -> j). Moves above max_level are
/// folded back onto max_level.
class TruncatedChain {
public:
    TruncatedChain(DominantSystem system, std::size_t max_level);

    [[nodiscard]] DominantSystem system() const noexcept { return system_; }
    [[nodiscard]] std::size_t max_level() const noexcept { return max_level_; }
    [[nodiscard]] std::size_t size() const noexcept { return 2 * (max_level_ + 1); }

    [[nodiscard]] static std::size_t index(std::size_t level, Phase phase) noexcept {
        return 2 * level + (phase == Phase::Backoff ? 1 : 0);
    }

    [[nodiscard]] double transition(std::size_t from, std::size_t to) const noexcept {
        return matrix_[from * size() + to];
    }
    [[nodiscard]] double transition(std::size_t from_level, Phase from_phase, std::size_t to_level,
                                    Phase to_phase) const noexcept {
        return transition(index(from_level, from_phase), index(to_level, to_phase));
    }

    void add(std::size_t from, std::size_t to, double prob) noexcept { matrix_[from * size() + to] += prob; }

    [[nodiscard]] const std::vector<double>& dense() const noexcept { return matrix_; }

    /// Largest |row sum - 1|.
    [[nodiscard]] double stochasticity_error() const noexcept;

private:
    DominantSystem system_;
    std::size_t max_level_;
    std::vector<double> matrix_;
};

/// `rate` is lambda1 for DS1 and lambda2 for DS2. Throws InvalidArgument for
/// max_level < 2 or a rate outside [0,1).
[[nodiscard]] TruncatedChain build_chain(DominantSystem system, const AccessProbabilities& p, double rate,
                                         std::size_t max_level, ProtocolKind kind = ProtocolKind::FeedbackPriority);

struct StationaryDistribution {
    std::vector<double> mass;  // indexed by TruncatedChain::index
    double residual = 0.0;     // max |pi P - pi|

    [[nodiscard]] double at(std::size_t level, Phase phase) const noexcept {
        return mass[TruncatedChain::index(level, phase)];
    }
};

/// Dense LU solve of pi P = pi with sum(pi) = 1. Throws SingularSystem when
/// the solve fails or the residual exceeds 1e-12.
[[nodiscard]] StationaryDistribution stationary(const TruncatedChain& chain);

}  // namespace fbra
