#include "fbra/error.hpp"
#include "fbra/model.hpp"
#include "fbra/simulator.hpp"

#include <catch_amalgamated.hpp>

#include <vector>

using namespace fbra;

namespace {

const AccessProbabilities kHalf{0.5, 0.5};

}  // namespace

TEST_CASE("parameter validation", "[model]") {
    CHECK_THROWS_AS(AccessProbabilities(-0.1, 0.5), Error);
    CHECK_THROWS_AS(AccessProbabilities(0.5, 1.5), Error);
    CHECK_NOTHROW(AccessProbabilities(0.0, 1.0));
    CHECK_THROWS_AS(ArrivalRates(0.0, 0.5), Error);
    CHECK_THROWS_AS(ArrivalRates(0.5, 1.0), Error);
    CHECK_NOTHROW(ArrivalRates::boundary_inclusive(0.0, 1.0));
    CHECK_THROWS_AS(ArrivalRates::boundary_inclusive(-0.01, 0.5), Error);
    try {
        (void)AccessProbabilities(2.0, 0.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
}

TEST_CASE("empty system without arrivals stays idle", "[model]") {
    const auto r = advance_slot({0, 0, Phase::Normal}, ProtocolKind::ConventionalRA, DominanceMode::None, kHalf,
                                {false, false}, {true, true});
    CHECK(r.next == SystemState{0, 0, Phase::Normal});
    CHECK(r.outcome == SlotOutcome::Idle);
    CHECK_FALSE(r.transmitted[0]);
    CHECK_FALSE(r.transmitted[1]);
}

TEST_CASE("collision then priority retransmission", "[model]") {
    const auto first = advance_slot({1, 1, Phase::Normal}, ProtocolKind::FeedbackPriority, DominanceMode::None, kHalf,
                                    {false, false}, {true, true});
    CHECK(first.next == SystemState{1, 1, Phase::Backoff});
    CHECK(first.outcome == SlotOutcome::Collision);

    // Draws are ignored in the backoff slot.
    const auto second = advance_slot(first.next, ProtocolKind::FeedbackPriority, DominanceMode::None, kHalf,
                                     {false, false}, {false, true});
    CHECK(second.next == SystemState{0, 1, Phase::Normal});
    CHECK(second.outcome == SlotOutcome::PriorityRetransmission);
    CHECK(second.delivered[0]);
    CHECK_FALSE(second.transmitted[1]);
}

TEST_CASE("conventional random access has no backoff", "[model]") {
    const auto r = advance_slot({1, 1, Phase::Normal}, ProtocolKind::ConventionalRA, DominanceMode::None, kHalf,
                                {false, false}, {true, true});
    CHECK(r.next == SystemState{1, 1, Phase::Normal});
    CHECK(r.outcome == SlotOutcome::Collision);
}

TEST_CASE("arrivals join before access", "[model]") {
    const auto r = advance_slot({0, 0, Phase::Normal}, ProtocolKind::FeedbackPriority, DominanceMode::None, kHalf,
                                {true, false}, {true, true});
    CHECK(r.outcome == SlotOutcome::SuccessQ1);
    CHECK(r.delivered[0]);
    CHECK(r.next == SystemState{0, 0, Phase::Normal});
}

TEST_CASE("dummy transmissions remove nothing", "[model]") {
    const auto r = advance_slot({0, 3, Phase::Normal}, ProtocolKind::FeedbackPriority, DominanceMode::DS2, kHalf,
                                {false, false}, {true, false});
    CHECK(r.outcome == SlotOutcome::SuccessQ1);
    CHECK(r.transmitted[0]);
    CHECK_FALSE(r.delivered[0]);
    CHECK(r.next.q1_len == 0);

    const auto c = advance_slot({0, 3, Phase::Normal}, ProtocolKind::FeedbackPriority, DominanceMode::DS2, kHalf,
                                {false, false}, {true, true});
    CHECK(c.outcome == SlotOutcome::Collision);
    CHECK(c.next == SystemState{0, 3, Phase::Backoff});
}

TEST_CASE("exhaustive one-slot properties", "[model]") {
    for (auto kind : {ProtocolKind::FeedbackPriority, ProtocolKind::ConventionalRA}) {
        for (auto mode : {DominanceMode::None, DominanceMode::DS1, DominanceMode::DS2, DominanceMode::DS3}) {
            for (std::uint64_t q1 = 0; q1 < 3; ++q1) {
                for (std::uint64_t q2 = 0; q2 < 3; ++q2) {
                    for (auto phase : {Phase::Normal, Phase::Backoff}) {
                        if (phase == Phase::Backoff && kind == ProtocolKind::ConventionalRA) continue;
                        for (int bits = 0; bits < 16; ++bits) {
                            const std::array<bool, 2> arr{(bits & 1) != 0, (bits & 2) != 0};
                            const std::array<bool, 2> drw{(bits & 4) != 0, (bits & 8) != 0};
                            const SystemState s{q1, q2, phase};
                            const auto r = advance_slot(s, kind, mode, kHalf, arr, drw);
                            const auto l1 = q1 + arr[0];
                            const auto l2 = q2 + arr[1];
                            CHECK(r.next.q1_len + r.delivered[0] == l1);
                            CHECK(r.next.q2_len + r.delivered[1] == l2);
                            CHECK_FALSE((r.delivered[0] && r.delivered[1]));
                            if (phase == Phase::Backoff) {
                                CHECK(r.next.phase == Phase::Normal);
                                CHECK(r.outcome == SlotOutcome::PriorityRetransmission);
                            }
                            if (r.next.phase == Phase::Backoff) CHECK(r.outcome == SlotOutcome::Collision);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("no two consecutive collisions under feedback priority", "[model]") {
    SimulationConfig cfg;
    cfg.p = AccessProbabilities(0.9, 0.9);
    cfg.l = ArrivalRates(0.6, 0.6);
    cfg.horizon = 100'000;
    bool previous_collision = false;
    std::uint64_t violations = 0, collisions = 0;
    (void)run(cfg, [&](const SlotRecord& rec) {
        const bool c = rec.result.outcome == SlotOutcome::Collision;
        if (c && previous_collision) ++violations;
        collisions += c;
        previous_collision = c;
    });
    CHECK(collisions > 1000);
    CHECK(violations == 0);
}

TEST_CASE("parsers and names", "[model]") {
    CHECK(parse_protocol_kind("feedback") == ProtocolKind::FeedbackPriority);
    CHECK(parse_protocol_kind("conventional") == ProtocolKind::ConventionalRA);
    CHECK(parse_dominance_mode("ds3") == DominanceMode::DS3);
    CHECK_THROWS_AS(parse_dominance_mode("ds4"), Error);
    CHECK(to_string(DominanceMode::DS1) == "ds1");
    CHECK(forces_queue1(DominanceMode::DS2));
    CHECK_FALSE(forces_queue1(DominanceMode::DS1));
    CHECK(is_forced(DominanceMode::DS3, 1));
}

namespace {

std::vector<std::array<std::uint64_t, 2>> path(DominanceMode mode, const AccessProbabilities& p,
                                               const ArrivalRates& l, std::uint64_t seed) {
    SimulationConfig cfg;
    cfg.mode = mode;
    cfg.p = p;
    cfg.l = l;
    cfg.horizon = 50'000;
    cfg.seed = seed;
    cfg.record_trajectory = true;
    return run(cfg).trajectory;
}

}  // namespace

TEST_CASE("pathwise dominance for the unforced queue", "[model][coupling]") {
    const std::vector<std::pair<AccessProbabilities, ArrivalRates>> cases = {
        {{0.5, 0.5}, {0.2, 0.1}}, {{0.9, 0.3}, {0.3, 0.2}}, {{0.3, 0.8}, {0.1, 0.3}}, {{1.0, 0.5}, {0.4, 0.1}}};
    for (const auto& [p, l] : cases) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto base = path(DominanceMode::None, p, l, seed);
            const auto ds1 = path(DominanceMode::DS1, p, l, seed);
            const auto ds2 = path(DominanceMode::DS2, p, l, seed);
            std::uint64_t bad1 = 0, bad2 = 0;
            for (std::size_t t = 0; t < base.size(); ++t) {
                bad1 += base[t][0] > ds1[t][0];
                bad2 += base[t][1] > ds2[t][1];
            }
            CHECK(bad1 == 0);
            CHECK(bad2 == 0);
        }
    }
}

TEST_CASE("the forced queue is not pathwise dominated", "[model][coupling]") {
    // Dummy collisions push queue 1 into retransmission, which silences queue 2
    // for a slot and can leave it longer in the original system.
    const AccessProbabilities p{0.5, 0.5};
    const ArrivalRates l{0.2, 0.2};
    const auto base = path(DominanceMode::None, p, l, 7);
    const auto ds2 = path(DominanceMode::DS2, p, l, 7);
    const auto ds1 = path(DominanceMode::DS1, p, l, 7);
    std::uint64_t q1_exceeds = 0, q2_exceeds = 0;
    for (std::size_t t = 0; t < base.size(); ++t) {
        q1_exceeds += base[t][0] > ds2[t][0];
        q2_exceeds += base[t][1] > ds1[t][1];
    }
    CHECK(q1_exceeds + q2_exceeds > 0);
}
