#pragma once

#include "fbra/analytic.hpp"
#include "fbra/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fbra {

/// Evenly spaced grid 0, step, 2 step, ... up to 1 (inclusive when step divides 1).
/// Throws InvalidArgument unless 0 < step <= max_step.
[[nodiscard]] std::vector<double> unit_grid(double step, double max_step = 1.0);

struct EnvelopeRow {
    double lambda1 = 0.0;
    double numeric = 0.0;         // max over the p-grid of the union-region l2 supremum
    double lemma2_numeric = 0.0;  // same, second clause only
    double theorem1 = 0.0;
    double ra = 0.0;
    double td = 0.0;
    double p1_star = 0.0;         // argmax of `numeric` (first hit in grid order)
    double p2_star = 0.0;
};

struct RegionPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    bool stable = false;
};

struct RegionDataset {
    double p_step = 0.01;
    double lambda_step = 0.005;
    std::vector<EnvelopeRow> rows;
    /// lambda-grid squared; (p1, p2) is the row's argmax and `stable` means
    /// lambda2 lies below the numeric envelope.
    std::vector<RegionPoint> points;
};

/// Grid maximization over p in [0,1]^2. Steps must lie in (0, 0.1].
[[nodiscard]] RegionDataset sweep(double p_step = 0.01, double lambda_step = 0.005, bool include_points = false);

struct EnvelopeComparison {
    double max_dev_numeric_theorem = 0.0;
    double argmax_dev_lambda1 = 0.0;
    double max_dev_lemma2_theorem = 0.0;
    bool ra_le_priority = true;             // theorem-1 envelope vs RA, whole grid
    bool ra_lt_priority_inside = true;      // strict on (0,1)
    bool priority_le_td = true;
    bool numeric_le_td = true;
    bool numeric_le_theorem = true;         // grid maximum never exceeds the closed form
    bool monotone = true;                   // all four envelopes nonincreasing
    std::optional<double> knee_lambda1;
};

/// Deviations are taken over rows with lambda1 in [l1_min, l1_max].
[[nodiscard]] EnvelopeComparison compare_envelopes(const RegionDataset& data, double l1_min = 0.0,
                                                   double l1_max = 1.0);

/// First grid point where the numeric envelope's second difference exceeds
/// curvature_threshold * step^2, i.e. where the straight segment ends.
[[nodiscard]] std::optional<double> detect_knee(const RegionDataset& data, double curvature_threshold = 1.0);

struct RegionCloudPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    RegionVerdict verdict;
};

/// Union-region membership for fixed p over the lambda-grid squared.
[[nodiscard]] std::vector<RegionCloudPoint> region_cloud(const AccessProbabilities& p, double lambda_step);

}  // namespace fbra
