#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace fbra {

/// Per-slot channel access probabilities of the two queues.
class AccessProbabilities {
public:
    /// Throws Error{InvalidArgument} unless both values lie in [0, 1].
    AccessProbabilities(double p1, double p2);

    [[nodiscard]] double p1() const noexcept { return p1_; }
    [[nodiscard]] double p2() const noexcept { return p2_; }

    friend bool operator==(const AccessProbabilities&, const AccessProbabilities&) = default;

private:
    double p1_;
    double p2_;
};

/// Bernoulli arrival means in packets/slot.
///
/// Strictly inside (0, 1) by default. Sweep grids that need the closed
/// endpoints construct through `boundary_inclusive`.
class ArrivalRates {
public:
    ArrivalRates(double l1, double l2);

    static ArrivalRates boundary_inclusive(double l1, double l2);

    [[nodiscard]] double l1() const noexcept { return l1_; }
    [[nodiscard]] double l2() const noexcept { return l2_; }

    friend bool operator==(const ArrivalRates&, const ArrivalRates&) = default;

private:
    struct Unchecked {};
    ArrivalRates(double l1, double l2, Unchecked) noexcept : l1_(l1), l2_(l2) {}

    double l1_;
    double l2_;
};

enum class ProtocolKind : std::uint8_t {
    FeedbackPriority,  // after a collision queue 1 retransmits, queue 2 backs off
    ConventionalRA,
};

/// Which queues contend with dummy packets when empty.
enum class DominanceMode : std::uint8_t {
    None,
    DS1,  // queue 2 forced
    DS2,  // queue 1 forced
    DS3,  // both forced
};

enum class SlotOutcome : std::uint8_t {
    Idle,
    SuccessQ1,
    SuccessQ2,
    Collision,
    PriorityRetransmission,
};

enum class Phase : std::uint8_t {
    Normal,
    Backoff,  // previous slot collided under FeedbackPriority
};

/// Queue lengths and protocol phase at a slot boundary.
///
/// Backoff with q1_len == 0 only arises when queue 1 is forced (DS2/DS3):
/// the collided transmission was a dummy.
struct SystemState {
    std::uint64_t q1_len = 0;
    std::uint64_t q2_len = 0;
    Phase phase = Phase::Normal;

    friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct SlotResult {
    SystemState next;
    SlotOutcome outcome;
    /// Whether each queue put something on the air this slot (real or dummy).
    std::array<bool, 2> transmitted{};
    /// Whether the successful transmission, if any, carried a real packet.
    std::array<bool, 2> delivered{};
};

[[nodiscard]] constexpr bool forces_queue1(DominanceMode mode) noexcept {
    return mode == DominanceMode::DS2 || mode == DominanceMode::DS3;
}

[[nodiscard]] constexpr bool forces_queue2(DominanceMode mode) noexcept {
    return mode == DominanceMode::DS1 || mode == DominanceMode::DS3;
}

[[nodiscard]] constexpr bool is_forced(DominanceMode mode, int queue) noexcept {
    return queue == 0 ? forces_queue1(mode) : forces_queue2(mode);
}

/// One slot of the collision channel.
///
/// Arrivals join the queues before access decisions, so a packet arriving
/// into an empty queue may contend in the same slot. `access_draws` are the
/// already-drawn Bernoulli(p1), Bernoulli(p2) coins; `p` is accepted so the
/// signature documents which law the draws came from, but the transition
/// reads only the coins. In a Backoff slot queue 1 sends with probability
/// one and queue 2 stays silent regardless of the draws.
[[nodiscard]] SlotResult advance_slot(const SystemState& state, ProtocolKind kind, DominanceMode mode,
                                      const AccessProbabilities& p, std::array<bool, 2> arrivals,
                                      std::array<bool, 2> access_draws) noexcept;

std::string_view to_string(ProtocolKind kind) noexcept;
std::string_view to_string(DominanceMode mode) noexcept;
std::string_view to_string(SlotOutcome outcome) noexcept;
std::string_view to_string(Phase phase) noexcept;

/// Parse the CLI spellings ("feedback"/"conventional", "none"/"ds1"/...).
/// Throws Error{InvalidArgument} on anything else.
ProtocolKind parse_protocol_kind(std::string_view text);
DominanceMode parse_dominance_mode(std::string_view text);

}  // namespace fbra
