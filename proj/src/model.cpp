#include "fbra/model.hpp"

#include "fbra/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace fbra {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DegenerateParameter: return "DegenerateParameter";
        case ErrorKind::Unstable: return "Unstable";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::SingularBlock: return "SingularBlock";
        case ErrorKind::SingularSystem: return "SingularSystem";
    }
    return "Unknown";
}

void raise(ErrorKind kind, const std::string& what) {
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

namespace {

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

std::string pair_text(double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << a << ", " << b << ")";
    return os.str();
}

}  // namespace

AccessProbabilities::AccessProbabilities(double p1, double p2) : p1_(p1), p2_(p2) {
    if (!in_unit_interval(p1) || !in_unit_interval(p2)) {
        raise(ErrorKind::InvalidArgument, "access probabilities must lie in [0,1], got " + pair_text(p1, p2));
    }
}

ArrivalRates::ArrivalRates(double l1, double l2) : l1_(l1), l2_(l2) {
    auto open = [](double x) { return std::isfinite(x) && x > 0.0 && x < 1.0; };
    if (!open(l1) || !open(l2)) {
        raise(ErrorKind::InvalidArgument, "arrival rates must lie in (0,1), got " + pair_text(l1, l2));
    }
}

ArrivalRates ArrivalRates::boundary_inclusive(double l1, double l2) {
    if (!in_unit_interval(l1) || !in_unit_interval(l2)) {
        raise(ErrorKind::InvalidArgument, "grid arrival rates must lie in [0,1], got " + pair_text(l1, l2));
    }
    return ArrivalRates(l1, l2, Unchecked{});
}

SlotResult advance_slot(const SystemState& state, ProtocolKind kind, DominanceMode mode,
                        [[maybe_unused]] const AccessProbabilities& p, std::array<bool, 2> arrivals,
                        std::array<bool, 2> access_draws) noexcept {
    std::uint64_t q1 = state.q1_len + (arrivals[0] ? 1 : 0);
    std::uint64_t q2 = state.q2_len + (arrivals[1] ? 1 : 0);

    const bool backoff = kind == ProtocolKind::FeedbackPriority && state.phase == Phase::Backoff;

    bool send1 = false;
    bool send2 = false;
    if (backoff) {
        send1 = true;
    } else {
        send1 = access_draws[0] && (q1 > 0 || forces_queue1(mode));
        send2 = access_draws[1] && (q2 > 0 || forces_queue2(mode));
    }

    SlotResult result{};
    result.transmitted = {send1, send2};
    result.next.phase = Phase::Normal;

    if (send1 && send2) {
        result.outcome = SlotOutcome::Collision;
        if (kind == ProtocolKind::FeedbackPriority) result.next.phase = Phase::Backoff;
    } else if (send1) {
        result.outcome = backoff ? SlotOutcome::PriorityRetransmission : SlotOutcome::SuccessQ1;
        if (q1 > 0) {
            --q1;
            result.delivered[0] = true;
        }
    } else if (send2) {
        result.outcome = SlotOutcome::SuccessQ2;
        if (q2 > 0) {
            --q2;
            result.delivered[1] = true;
        }
    } else {
        result.outcome = SlotOutcome::Idle;
    }

    result.next.q1_len = q1;
    result.next.q2_len = q2;
    return result;
}

std::string_view to_string(ProtocolKind kind) noexcept {
    switch (kind) {
        case ProtocolKind::FeedbackPriority: return "feedback";
        case ProtocolKind::ConventionalRA: return "conventional";
    }
    return "?";
}

std::string_view to_string(DominanceMode mode) noexcept {
    switch (mode) {
        case DominanceMode::None: return "none";
        case DominanceMode::DS1: return "ds1";
        case DominanceMode::DS2: return "ds2";
        case DominanceMode::DS3: return "ds3";
    }
    return "?";
}

std::string_view to_string(SlotOutcome outcome) noexcept {
    switch (outcome) {
        case SlotOutcome::Idle: return "idle";
        case SlotOutcome::SuccessQ1: return "success_q1";
        case SlotOutcome::SuccessQ2: return "success_q2";
        case SlotOutcome::Collision: return "collision";
        case SlotOutcome::PriorityRetransmission: return "priority_retransmission";
    }
    return "?";
}

std::string_view to_string(Phase phase) noexcept {
    return phase == Phase::Normal ? "normal" : "backoff";
}

ProtocolKind parse_protocol_kind(std::string_view text) {
    if (text == "feedback" || text == "priority") return ProtocolKind::FeedbackPriority;
    if (text == "conventional" || text == "ra") return ProtocolKind::ConventionalRA;
    raise(ErrorKind::InvalidArgument, "unknown protocol kind '" + std::string(text) + "'");
}

DominanceMode parse_dominance_mode(std::string_view text) {
    if (text == "none") return DominanceMode::None;
    if (text == "ds1") return DominanceMode::DS1;
    if (text == "ds2") return DominanceMode::DS2;
    if (text == "ds3") return DominanceMode::DS3;
    raise(ErrorKind::InvalidArgument, "unknown dominance mode '" + std::string(text) + "'");
}

}  // namespace fbra
