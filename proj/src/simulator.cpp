#include "fbra/simulator.hpp"

#include "fbra/error.hpp"

#include <algorithm>
#include <cmath>

namespace fbra {

std::uint64_t default_warmup(std::uint64_t horizon) noexcept {
    return std::max(horizon / 100, std::min<std::uint64_t>(10'000, horizon / 10));
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

/// Online least-squares slope of y against the sample index.
class SlopeAccumulator {
public:
    void add(double y) noexcept {
        const double x = static_cast<double>(n_);
        ++n_;
        const double dx = x - mean_x_;
        mean_x_ += dx / static_cast<double>(n_);
        mean_y_ += (y - mean_y_) / static_cast<double>(n_);
        sxx_ += dx * (x - mean_x_);
        sxy_ += dx * (y - mean_y_);
    }
    [[nodiscard]] double slope() const noexcept { return sxx_ > 0.0 ? sxy_ / sxx_ : 0.0; }
    [[nodiscard]] double mean() const noexcept { return mean_y_; }

private:
    std::uint64_t n_ = 0;
    double mean_x_ = 0.0;
    double mean_y_ = 0.0;
    double sxx_ = 0.0;
    double sxy_ = 0.0;
};

struct BatchRatio {
    std::vector<double> num;
    std::vector<double> den;

    explicit BatchRatio(std::size_t batches) : num(batches, 0.0), den(batches, 0.0) {}

    [[nodiscard]] double std_error() const noexcept {
        std::vector<double> ratios;
        ratios.reserve(num.size());
        for (std::size_t b = 0; b < num.size(); ++b) {
            if (den[b] > 0.0) ratios.push_back(num[b] / den[b]);
        }
        if (ratios.size() < 2) return 0.0;
        double mean = 0.0;
        for (double r : ratios) mean += r;
        mean /= static_cast<double>(ratios.size());
        double ss = 0.0;
        for (double r : ratios) ss += (r - mean) * (r - mean);
        const auto m = static_cast<double>(ratios.size());
        return std::sqrt(ss / (m - 1.0) / m);
    }
};

double to_unit(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

CoinStreams::CoinStreams(std::uint64_t seed) {
    for (std::uint32_t s = 0; s < gens_.size(); ++s) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), s};
        gens_[s].seed(seq);
    }
}

std::array<bool, 4> CoinStreams::draw(const AccessProbabilities& p, const ArrivalRates& l) {
    return {to_unit(gens_[0]()) < l.l1(), to_unit(gens_[1]()) < l.l2(), to_unit(gens_[2]()) < p.p1(),
            to_unit(gens_[3]()) < p.p2()};
}

double least_squares_slope(std::span<const double> trajectory) noexcept {
    SlopeAccumulator acc;
    for (double y : trajectory) acc.add(y);
    return acc.slope();
}

Verdict classify_stability(double slope, double final_length, std::uint64_t horizon, std::uint64_t samples,
                           const StabilityThresholds& th) noexcept {
    if (samples < th.min_samples) return Verdict::Inconclusive;
    if (std::abs(slope) < th.stable_slope && final_length < th.final_fraction * static_cast<double>(horizon)) {
        return Verdict::Stable;
    }
    if (slope > th.unstable_slope) return Verdict::Unstable;
    return Verdict::Inconclusive;
}

Verdict classify_stability(std::span<const double> trajectory, const StabilityThresholds& th) {
    if (trajectory.empty()) return Verdict::Inconclusive;
    return classify_stability(least_squares_slope(trajectory), trajectory.back(), trajectory.size(),
                              trajectory.size(), th);
}

SimulationMetrics run(const SimulationConfig& config, const SlotObserver& observer) {
    SimulationMetrics out;
    out.config = config;
    const std::uint64_t warmup = config.warmup.value_or(default_warmup(config.horizon));
    out.config.warmup = warmup;
    if (!(config.horizon > warmup)) raise(ErrorKind::InvalidArgument, "horizon must exceed warmup");
    if (config.batches < 1) raise(ErrorKind::InvalidArgument, "at least one batch is required");
    if (config.kind == ProtocolKind::ConventionalRA && config.initial.phase == Phase::Backoff) {
        raise(ErrorKind::InvalidArgument, "conventional RA has no backoff phase");
    }

    const std::uint64_t measured = config.horizon - warmup;
    out.measured_slots = measured;
    const std::size_t batches = std::min<std::uint64_t>(config.batches, measured);
    auto batch_of = [&](std::uint64_t t) {
        return static_cast<std::size_t>((t * batches) / measured);
    };

    std::array<BatchRatio, 2> mu_batches{BatchRatio(batches), BatchRatio(batches)};
    BatchRatio backoff_batches(batches);
    std::array<SlopeAccumulator, 2> slope;
    std::array<bool, 2> forced{forces_queue1(config.mode), forces_queue2(config.mode)};

    CoinStreams coins(config.seed);
    SystemState state = config.initial;
    if (config.record_trajectory) out.trajectory.reserve(measured);

    for (std::uint64_t slot = 0; slot < config.horizon; ++slot) {
        const auto c = coins.draw(config.p, config.l);
        const std::array<bool, 2> arrivals{c[0], c[1]};
        const std::array<bool, 2> draws{c[2], c[3]};
        const SlotResult res = advance_slot(state, config.kind, config.mode, config.p, arrivals, draws);

        if (observer) observer(SlotRecord{slot, state, arrivals, draws, res});

        if (slot >= warmup) {
            const std::uint64_t t = slot - warmup;
            const std::size_t b = batch_of(t);
            const std::array<std::uint64_t, 2> after_arrival{state.q1_len + (arrivals[0] ? 1u : 0u),
                                                             state.q2_len + (arrivals[1] ? 1u : 0u)};
            const std::array<std::uint64_t, 2> len{res.next.q1_len, res.next.q2_len};
            const bool success1 = res.outcome == SlotOutcome::SuccessQ1 ||
                                  res.outcome == SlotOutcome::PriorityRetransmission;
            const std::array<bool, 2> success{success1, res.outcome == SlotOutcome::SuccessQ2};

            for (int q = 0; q < 2; ++q) {
                auto& m = out.queues[q];
                m.arrivals += arrivals[q] ? 1 : 0;
                m.delivered += res.delivered[q] ? 1 : 0;
                m.successes += success[q] ? 1 : 0;
                const bool busy = after_arrival[q] > 0;
                m.busy_slots += busy ? 1 : 0;
                m.max_length = std::max(m.max_length, len[q]);
                slope[q].add(static_cast<double>(len[q]));
                if (forced[q]) {
                    mu_batches[q].num[b] += success[q] ? 1.0 : 0.0;
                    mu_batches[q].den[b] += 1.0;
                } else {
                    mu_batches[q].num[b] += res.delivered[q] ? 1.0 : 0.0;
                    mu_batches[q].den[b] += busy ? 1.0 : 0.0;
                }
            }
            const bool in_backoff = state.phase == Phase::Backoff;
            backoff_batches.num[b] += in_backoff ? 1.0 : 0.0;
            backoff_batches.den[b] += 1.0;
            ++out.outcome_counts[static_cast<std::size_t>(res.outcome)];
            if (config.record_trajectory) out.trajectory.push_back(len);
        }
        state = res.next;
    }

    double backoff_slots = 0.0;
    for (double v : backoff_batches.num) backoff_slots += v;
    out.backoff_occupancy = backoff_slots / static_cast<double>(measured);
    out.backoff_std_error = backoff_batches.std_error();

    const std::array<std::uint64_t, 2> final_len{state.q1_len, state.q2_len};
    for (int q = 0; q < 2; ++q) {
        auto& m = out.queues[q];
        const double num = forced[q] ? static_cast<double>(m.successes) : static_cast<double>(m.delivered);
        const double den = forced[q] ? static_cast<double>(measured) : static_cast<double>(m.busy_slots);
        m.empirical_mu = den > 0.0 ? num / den : 0.0;
        m.mu_std_error = mu_batches[q].std_error();
        m.mean_length = slope[q].mean();
        m.final_length = final_len[q];
        m.drift = slope[q].slope();
        m.verdict = classify_stability(m.drift, static_cast<double>(m.final_length), config.horizon, measured);
    }
    out.total_drift = out.queues[0].drift + out.queues[1].drift;
    return out;
}

}  // namespace fbra
