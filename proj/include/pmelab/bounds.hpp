#pragma once

// Right-hand sides of the gradient estimates.
//
// With x = w/2 = (2t/N) sqrt(NR) sqrt(y + NR/4):
//   C(t,y)    = NR/2 + (N/2t) x coth x
//   ∂y C(t,y) = R t (coth x - x csch² x) / x
//   Q(t,y)    = C(t,y) + y
// C solves dC/dt + (2/N) C² - 2R (C + y) = 0 with C(0+) = +∞.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/special.hpp"

namespace pmelab {

/// Scalars entering the right-hand sides.
struct BoundParams {
    double m = 1.0;
    double n = 1.0;
    double N = 1.0;
    double K = 0.0;
    double R = 0.0;
    double c = std::numeric_limits<double>::infinity();
};

/// N from 2/N = 2/n + m - 1.
inline double n_effective(double n, double m) {
    const double denom = 2.0 / n + m - 1.0;
    if (!(denom > 1e-12 * (2.0 / n + std::abs(m) + 1.0)))
        throw OutOfRange("n_effective: requires m > 1 - 2/n (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
    return 2.0 / denom;
}

namespace detail {

inline double shifted_y(double y, double N, double R) {
    const double shift = y + 0.25 * N * R;
    if (shift < -1e-14 * (1.0 + std::abs(y) + N * R))
        throw OutOfRange("bound functions: requires y >= -NR/4");
    return std::max(shift, 0.0);
}

inline void check_time(double t) {
    if (!(t > 0.0)) throw OutOfRange("bound functions: requires t > 0");
}

inline double half_w(double t, double y, double N, double R) {
    return 2.0 * t / N * std::sqrt(N * R) * std::sqrt(shifted_y(y, N, R));
}

} // namespace detail

/// w(t,y) = (4t/N) sqrt(NR) sqrt(y + NR/4).
inline double w_fn(double t, double y, double N, double R) {
    detail::check_time(t);
    return 2.0 * detail::half_w(t, y, N, R);
}

inline double capC(double t, double y, double N, double R) {
    detail::check_time(t);
    const double x = detail::half_w(t, y, N, R);
    return 0.5 * N * R + 0.5 * N / t * special::xcoth(x);
}

inline double dC_dy(double t, double y, double N, double R) {
    detail::check_time(t);
    const double x = detail::half_w(t, y, N, R);
    return R * t * special::dxcoth_over_x(x);
}

inline double bigQ(double t, double y, double N, double R) { return capC(t, y, N, R) + y; }

/// Integrates the Riccati equation from the closed form at t_grid[0] with
/// classical RK4 on geometric substeps and returns the max absolute deviation
/// from capC over t_grid.
inline double riccati_residual(const std::vector<double>& t_grid, double y, double N, double R,
                               double relative_step = 5e-4) {
    if (t_grid.empty()) return 0.0;
    auto rhs = [&](double c) { return -2.0 / N * c * c + 2.0 * R * (c + y); };
    double t = t_grid.front();
    double c = capC(t, y, N, R);
    double worst = 0.0;
    for (std::size_t j = 1; j < t_grid.size(); ++j) {
        const double target = t_grid[j];
        if (!(target > t)) throw OutOfRange("riccati_residual: t_grid must be increasing");
        while (t < target) {
            const double h = std::min(relative_step * t, target - t);
            const double k1 = rhs(c);
            const double k2 = rhs(c + 0.5 * h * k1);
            const double k3 = rhs(c + 0.5 * h * k2);
            const double k4 = rhs(c + h * k3);
            c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
            if (target - t <= 1e-14 * target) t = target;
        }
        worst = std::max(worst, std::abs(c - capC(target, y, N, R)));
    }
    return worst;
}

/// N/(2t) + 2Km u^(m-1) / ((1-m)(2m-1)), valid for max(1/2, 1-2/n) < m < 1.
inline double thm_a1_rhs(double t, double u, double m, double n, double K) {
    if (!(m > 0.5 && m < 1.0 && m > 1.0 - 2.0 / n))
        throw OutOfRange("thm_a1_rhs: requires max(1/2, 1-2/n) < m < 1, got m=" + std::to_string(m));
    if (!(u > 0.0)) throw OutOfRange("thm_a1_rhs: u must be positive");
    detail::check_time(t);
    const double N = n_effective(n, m);
    return 0.5 * N / t + 2.0 * K * m * std::pow(u, m - 1.0) / ((1.0 - m) * (2.0 * m - 1.0));
}

/// (2t/N + 1/c)^(-1) for c in [0, ∞]; t is measured from the time where
/// the initial bound Z <= c holds.
inline double thm_a2_rhs(double t, double c, double N) {
    if (!(c >= 0.0)) throw OutOfRange("thm_a2_rhs: c must be >= 0");
    if (c == 0.0) return 0.0;
    if (std::isinf(c)) {
        detail::check_time(t);
        return 0.5 * N / t;
    }
    return 1.0 / (2.0 * t / N + 1.0 / c);
}

/// c / ((N/2t) c + 1), the variant printed in the theorem statement.
inline double thm_a2_rhs_display_variant(double t, double c, double N) {
    if (std::isinf(c)) return 2.0 * t / N;
    return c / (0.5 * N / t * c + 1.0);
}

} // namespace pmelab
