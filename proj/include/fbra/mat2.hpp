#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace fbra {

/// Dense 2x2 real matrix, row-major: m[row][col].
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{};

    static constexpr Mat2 identity() noexcept { return Mat2{{{{1.0, 0.0}, {0.0, 1.0}}}}; }
    static constexpr Mat2 zero() noexcept { return Mat2{}; }
    static constexpr Mat2 of(double a, double b, double c, double d) noexcept { return Mat2{{{{a, b}, {c, d}}}}; }

    constexpr double& operator()(int r, int c) noexcept { return m[r][c]; }
    constexpr double operator()(int r, int c) const noexcept { return m[r][c]; }

    [[nodiscard]] constexpr double trace() const noexcept { return m[0][0] + m[1][1]; }
    [[nodiscard]] constexpr double det() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

    [[nodiscard]] double max_abs() const noexcept {
        return std::max({std::abs(m[0][0]), std::abs(m[0][1]), std::abs(m[1][0]), std::abs(m[1][1])});
    }

    [[nodiscard]] constexpr double column_sum(int c) const noexcept { return m[0][c] + m[1][c]; }

    /// Closed-form inverse; nullopt when |det| <= min_abs_det.
    [[nodiscard]] std::optional<Mat2> inverse(double min_abs_det = 1e-14) const noexcept {
        const double d = det();
        if (!(std::abs(d) > min_abs_det)) return std::nullopt;
        return of(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d);
    }

    friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) noexcept {
        return of(a(0, 0) + b(0, 0), a(0, 1) + b(0, 1), a(1, 0) + b(1, 0), a(1, 1) + b(1, 1));
    }
    friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) noexcept {
        return of(a(0, 0) - b(0, 0), a(0, 1) - b(0, 1), a(1, 0) - b(1, 0), a(1, 1) - b(1, 1));
    }
    friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) noexcept {
        return of(a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                  a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1));
    }
    friend constexpr Mat2 operator*(double s, const Mat2& a) noexcept {
        return of(s * a(0, 0), s * a(0, 1), s * a(1, 0), s * a(1, 1));
    }
    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

using Vec2 = std::array<double, 2>;

constexpr Vec2 operator*(const Mat2& a, const Vec2& v) noexcept {
    return {a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]};
}

}  // namespace fbra
