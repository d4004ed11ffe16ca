#pragma once

// Scalar helpers for hyperbolic functions near their removable singularities.

#include <cmath>

namespace pmelab::special {

/// coth(x) for x > 0. Laurent series below 1e-4, exactly 1 above 60.
inline double coth(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) return 1.0 / x + x / 3.0;
    if (ax > 60.0) return x > 0 ? 1.0 : -1.0;
    return 1.0 / std::tanh(x);
}

/// x*coth(x), even and smooth with value 1 at the origin.
inline double xcoth(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    if (ax > 60.0) return ax;
    return x / std::tanh(x);
}

/// (coth(x) - x*csch^2(x)) / x, i.e. (d/dx xcoth(x)) / x. Tends to 2/3 at 0.
inline double dxcoth_over_x(double x) {
    const double ax = std::abs(x);
    if (ax < 0.1) {
        const double x2 = x * x;
        return 2.0 / 3.0 + x2 * (-4.0 / 45.0 + x2 * (12.0 / 945.0 + x2 * (-8.0 / 4725.0 + x2 * 20.0 / 93555.0)));
    }
    if (ax > 60.0) return 1.0 / ax;
    const double s = std::sinh(x);
    return (1.0 / std::tanh(x) - x / (s * s)) / x;
}

} // namespace pmelab::special

namespace pmelab::special {

/// sinh(x)/x with the removable singularity filled in.
inline double sinhc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

} // namespace pmelab::special
