#include "fbra/sweep.hpp"

#include "fbra/error.hpp"

#include <cmath>
#include <string>

namespace fbra {

std::vector<double> unit_grid(double step, double max_step) {
    if (!std::isfinite(step) || !(step > 0.0) || step > max_step) {
        raise(ErrorKind::InvalidArgument,
              "grid step must lie in (0, " + std::to_string(max_step) + "], got " + std::to_string(step));
    }
    const auto n = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(n + 1);
    // i / (1/step) lands on short decimals when 1/step is integral.
    const double inv = 1.0 / step;
    const bool integral = std::abs(inv - std::round(inv)) < 1e-9;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = integral ? static_cast<double>(i) / std::round(inv) : static_cast<double>(i) * step;
        grid.push_back(std::min(1.0, x));
    }
    return grid;
}

RegionDataset sweep(double p_step, double lambda_step, bool include_points) {
    const auto pgrid = unit_grid(p_step, 0.1);
    const auto lgrid = unit_grid(lambda_step, 0.1);

    std::vector<AccessProbabilities> ps;
    ps.reserve(pgrid.size() * pgrid.size());
    for (double p1 : pgrid) {
        for (double p2 : pgrid) ps.emplace_back(p1, p2);
    }

    RegionDataset data;
    data.p_step = p_step;
    data.lambda_step = lambda_step;
    data.rows.reserve(lgrid.size());
    for (double l1 : lgrid) {
        EnvelopeRow row;
        row.lambda1 = l1;
        for (const auto& p : ps) {
            const double sup = lemma3_lambda2_supremum(p, l1);
            if (sup > row.numeric) {
                row.numeric = sup;
                row.p1_star = p.p1();
                row.p2_star = p.p2();
            }
            row.lemma2_numeric = std::max(row.lemma2_numeric, lemma2_lambda2_supremum(p, l1));
        }
        row.theorem1 = theorem1_boundary(l1);
        row.ra = ra_boundary(l1);
        row.td = td_boundary(l1);
        data.rows.push_back(row);
    }

    if (include_points) {
        data.points.reserve(lgrid.size() * lgrid.size());
        for (const auto& row : data.rows) {
            for (double l2 : lgrid) {
                data.points.push_back({row.lambda1, l2, row.p1_star, row.p2_star, l2 < row.numeric});
            }
        }
    }
    return data;
}

std::optional<double> detect_knee(const RegionDataset& data, double curvature_threshold) {
    const auto& r = data.rows;
    const double h = data.lambda_step;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double d2 = r[i - 1].numeric - 2.0 * r[i].numeric + r[i + 1].numeric;
        if (d2 > curvature_threshold * h * h) return r[i].lambda1;
    }
    return std::nullopt;
}

EnvelopeComparison compare_envelopes(const RegionDataset& data, double l1_min, double l1_max) {
    EnvelopeComparison cmp;
    constexpr double kSlack = 1e-12;
    const auto& rows = data.rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.lambda1 >= l1_min - kSlack && row.lambda1 <= l1_max + kSlack) {
            const double dev = std::abs(row.numeric - row.theorem1);
            if (dev > cmp.max_dev_numeric_theorem) {
                cmp.max_dev_numeric_theorem = dev;
                cmp.argmax_dev_lambda1 = row.lambda1;
            }
            cmp.max_dev_lemma2_theorem =
                std::max(cmp.max_dev_lemma2_theorem, std::abs(row.lemma2_numeric - row.theorem1));
        }
        cmp.ra_le_priority = cmp.ra_le_priority && row.ra <= row.theorem1;
        if (row.lambda1 > 0.0 && row.lambda1 < 1.0) {
            cmp.ra_lt_priority_inside = cmp.ra_lt_priority_inside && row.ra < row.theorem1;
        }
        cmp.priority_le_td = cmp.priority_le_td && row.theorem1 <= row.td;
        cmp.numeric_le_td = cmp.numeric_le_td && row.numeric <= row.td + kSlack;
        cmp.numeric_le_theorem = cmp.numeric_le_theorem && row.numeric <= row.theorem1 + kSlack;
        if (i > 0) {
            const auto& prev = rows[i - 1];
            cmp.monotone = cmp.monotone && row.numeric <= prev.numeric + kSlack &&
                           row.theorem1 <= prev.theorem1 + kSlack && row.ra <= prev.ra + kSlack &&
                           row.td <= prev.td + kSlack;
        }
    }
    cmp.knee_lambda1 = detect_knee(data);
    return cmp;
}

std::vector<RegionCloudPoint> region_cloud(const AccessProbabilities& p, double lambda_step) {
    const auto grid = unit_grid(lambda_step, 0.1);
    std::vector<RegionCloudPoint> cloud;
    cloud.reserve(grid.size() * grid.size());
    for (double l1 : grid) {
        for (double l2 : grid) {
            cloud.push_back({l1, l2, lemma3_contains(p, ArrivalRates::boundary_inclusive(l1, l2))});
        }
    }
    return cloud;
}

}  // namespace fbra
