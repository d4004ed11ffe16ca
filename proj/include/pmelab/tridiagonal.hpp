#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pmelab {

/// Tridiagonal system: lower[i] couples row i to i-1 (lower[0] unused),
/// upper[i] couples row i to i+1 (upper[n-1] unused).
struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const noexcept { return diag.size(); }
};

/// Thomas elimination without pivoting; intended for diagonally dominant
/// M-matrices produced by the implicit diffusion schemes.
inline std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::vector<double> rhs) {
    const std::size_t n = a.size();
    if (rhs.size() != n) throw std::invalid_argument("solve_tridiagonal: size mismatch");
    std::vector<double> c(n, 0.0);
    double denom = a.diag[0];
    if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[0] = n > 1 ? a.upper[0] / denom : 0.0;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = a.diag[i] - a.lower[i] * c[i - 1];
        if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
        c[i] = i + 1 < n ? a.upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - a.lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
    return rhs;
}

} // namespace pmelab
