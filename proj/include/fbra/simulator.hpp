#pragma once

#include "fbra/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace fbra {

inline constexpr std::uint64_t kDefaultSeed = 271828;

struct SimulationConfig {
    ProtocolKind kind = ProtocolKind::FeedbackPriority;
    DominanceMode mode = DominanceMode::None;
    AccessProbabilities p{0.5, 0.5};
    ArrivalRates l{0.1, 0.1};
    std::uint64_t horizon = 1'000'000;
    /// Slots excluded from every estimate; defaults to default_warmup(horizon).
    std::optional<std::uint64_t> warmup;
    std::uint64_t seed = kDefaultSeed;
    /// Batch count for batch-means standard errors.
    std::uint32_t batches = 100;
    bool record_trajectory = false;
    SystemState initial{};
};

/// 1% of the horizon, but at least min(10^4, horizon / 10).
[[nodiscard]] std::uint64_t default_warmup(std::uint64_t horizon) noexcept;

enum class Verdict : std::uint8_t { Stable, Unstable, Inconclusive };
std::string_view to_string(Verdict v) noexcept;

struct StabilityThresholds {
    double stable_slope = 1e-3;       // |slope| below this ...
    double final_fraction = 0.01;     // ... and final length below this share of the horizon
    double unstable_slope = 5e-3;
    std::uint64_t min_samples = 10'000;
};

/// Least-squares slope of a queue-length trajectory, then the threshold rule.
/// Uses the trajectory length as the horizon. Fewer than min_samples points
/// yields Inconclusive.
[[nodiscard]] Verdict classify_stability(std::span<const double> trajectory, const StabilityThresholds& th = {});
[[nodiscard]] Verdict classify_stability(double slope, double final_length, std::uint64_t horizon,
                                         std::uint64_t samples, const StabilityThresholds& th = {}) noexcept;
[[nodiscard]] double least_squares_slope(std::span<const double> trajectory) noexcept;

struct QueueMetrics {
    std::uint64_t arrivals = 0;
    std::uint64_t delivered = 0;   // real packets
    std::uint64_t successes = 0;   // successful transmissions, dummies included
    std::uint64_t busy_slots = 0;  // nonempty at access time
    /// Forced (dummy-sending) queue: successes per slot. Otherwise
    /// deliveries per busy slot.
    double empirical_mu = 0.0;
    double mu_std_error = 0.0;
    double mean_length = 0.0;
    std::uint64_t final_length = 0;
    std::uint64_t max_length = 0;
    double drift = 0.0;  // packets/slot
    Verdict verdict = Verdict::Inconclusive;
};

/// Every estimate covers the slots after warmup only.
struct SimulationMetrics {
    SimulationConfig config;  // warmup resolved
    std::uint64_t measured_slots = 0;
    std::array<QueueMetrics, 2> queues{};
    double backoff_occupancy = 0.0;
    double backoff_std_error = 0.0;
    std::array<std::uint64_t, 5> outcome_counts{};  // indexed by SlotOutcome
    double total_drift = 0.0;
    std::vector<std::array<std::uint64_t, 2>> trajectory;  // post-slot lengths, when recorded
};

struct SlotRecord {
    std::uint64_t slot = 0;
    SystemState before;
    std::array<bool, 2> arrivals{};
    std::array<bool, 2> draws{};
    SlotResult result;
};

using SlotObserver = std::function<void(const SlotRecord&)>;

/// Four independent streams (q1 arrivals, q2 arrivals, q1 access, q2 access)
/// are derived from the seed; every slot consumes one draw from each stream
/// whether or not it is used, so runs that differ only in protocol or
/// dominance mode see identical coin sequences.
class CoinStreams {
public:
    explicit CoinStreams(std::uint64_t seed);
    /// {arrival1, arrival2, access1, access2}
    std::array<bool, 4> draw(const AccessProbabilities& p, const ArrivalRates& l);

private:
    std::array<std::mt19937_64, 4> gens_;
};

/// Deterministic in (config, seed). Throws InvalidArgument if warmup >= horizon.
[[nodiscard]] SimulationMetrics run(const SimulationConfig& config, const SlotObserver& observer = {});

}  // namespace fbra
