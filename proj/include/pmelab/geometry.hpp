#pragma once

// Rotationally symmetric model manifolds dr^2 + A(r)^2 dθ^2 and the radial
// forms of the Laplace-Beltrami operator, Γ₂ and the CD(n,-K) defect.

#include <cmath>
#include <string>

#include "pmelab/errors.hpp"
#include "pmelab/grid.hpp"
#include "pmelab/special.hpp"

namespace pmelab {

enum class ManifoldKind { Euclidean, Hyperbolic };

inline std::string to_string(ManifoldKind k) {
    return k == ManifoldKind::Euclidean ? "euclidean" : "hyperbolic";
}

class ManifoldModel {
public:
    static ManifoldModel euclidean(int n) { return {ManifoldKind::Euclidean, n, 0.0}; }
    static ManifoldModel hyperbolic(int n, double kappa) { return {ManifoldKind::Hyperbolic, n, kappa}; }

    ManifoldModel(ManifoldKind kind, int n, double kappa) : kind_(kind), n_(n), kappa_(kappa) {
        if (n < 1) throw ConfigError("manifold: dimension must be >= 1");
        if (!(kappa >= 0.0)) throw ConfigError("manifold: kappa must be >= 0");
        if (kind == ManifoldKind::Euclidean) kappa_ = 0.0;
    }

    ManifoldKind kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }
    double dim() const noexcept { return static_cast<double>(n_); }
    /// Magnitude of the (negative) sectional curvature.
    double kappa() const noexcept { return kappa_; }

    /// K in CD(n,-K): Ric >= -(n-1) kappa on hyperbolic space.
    double cd_constant() const noexcept { return (dim() - 1.0) * kappa_; }

    /// Ric(∂r, ∂r) = -(n-1) A''/A.
    double ricci_radial() const noexcept { return -(dim() - 1.0) * warp_d2_over_warp(); }

    double warp(double r) const {
        if (kind_ == ManifoldKind::Euclidean) return r;
        return r * special::sinhc(std::sqrt(kappa_) * r);
    }

    double warp_d1(double r) const {
        if (kind_ == ManifoldKind::Euclidean) return 1.0;
        return std::cosh(std::sqrt(kappa_) * r);
    }

    /// A''/A, constant on both models.
    double warp_d2_over_warp() const noexcept { return kappa_; }

    /// A'/A for r > 0.
    double log_warp_d1(double r) const {
        if (kind_ == ManifoldKind::Euclidean) return 1.0 / r;
        return special::xcoth(std::sqrt(kappa_) * r) / r;
    }

    /// Metric weight A(r)^(n-1) of the sphere of radius r.
    double area_weight(double r) const { return std::pow(warp(r), dim() - 1.0); }

private:
    ManifoldKind kind_;
    int n_;
    double kappa_;
};

/// (n-1) A'(r)/A(r). At the pole the first-order term is replaced by
/// (n-1) g''(0) in radial_laplacian, and this function returns 0 there.
inline double drift_coefficient(const ManifoldModel& model, double r) {
    if (r < 0.0) throw OutOfRange("drift_coefficient: negative radius");
    if (r == 0.0) return 0.0;
    return (model.dim() - 1.0) * model.log_warp_d1(r);
}

/// Δg = g'' + (n-1)(A'/A) g' by centered differences; Δg(0) = n g''(0).
inline Field radial_laplacian(const ManifoldModel& model, const RadialGrid& grid, const Field& g) {
    const auto d = radial_derivatives(grid, g);
    Field out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = grid.r(i);
        out[i] = r == 0.0 ? model.dim() * d.d2[i] : d.d2[i] + drift_coefficient(model, r) * d.d1[i];
    }
    return out;
}

/// Γ(f, g) = f' g' for radial fields.
inline Field carre_du_champ(const RadialGrid& grid, const Field& f, const Field& g) {
    const auto df = radial_derivatives(grid, f);
    const auto dg = radial_derivatives(grid, g);
    Field out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = df.d1[i] * dg.d1[i];
    return out;
}

/// Pointwise Bochner form of Γ₂(f,f) from radial derivatives f', f''.
inline double gamma2_pointwise(const ManifoldModel& model, double r, double d1, double d2) {
    if (r == 0.0) return model.dim() * d2 * d2;
    const double nm1 = model.dim() - 1.0;
    const double tangential = model.log_warp_d1(r) * d1;
    return d2 * d2 + nm1 * tangential * tangential - nm1 * model.warp_d2_over_warp() * d1 * d1;
}

/// Γ₂(f,f) = |∇²f|² + Ric(∇f,∇f) for a radial f.
inline Field gamma2_radial(const ManifoldModel& model, const RadialGrid& grid, const Field& f) {
    const auto d = radial_derivatives(grid, f);
    Field out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = gamma2_pointwise(model, grid.r(i), d.d1[i], d.d2[i]);
    return out;
}

/// Γ₂ through its definition ½ LΓ(f,f) - Γ(f, Lf), using only discrete L and Γ.
inline Field gamma2_iterated(const ManifoldModel& model, const RadialGrid& grid, const Field& f) {
    const Field lf = radial_laplacian(model, grid, f);
    const Field l_gamma = radial_laplacian(model, grid, carre_du_champ(grid, f, f));
    const Field gamma_f_lf = carre_du_champ(grid, f, lf);
    Field out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = 0.5 * l_gamma[i] - gamma_f_lf[i];
    return out;
}

/// Γ₂(f,f) - (Lf)²/n + K|∇f|², nonnegative under CD(n,-K).
inline Field cd_defect(const ManifoldModel& model, const RadialGrid& grid, const Field& f) {
    const auto d = radial_derivatives(grid, f);
    const double K = model.cd_constant();
    Field out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = grid.r(i);
        const double lf = r == 0.0 ? model.dim() * d.d2[i] : d.d2[i] + drift_coefficient(model, r) * d.d1[i];
        out[i] = gamma2_pointwise(model, r, d.d1[i], d.d2[i]) - lf * lf / model.dim() + K * d.d1[i] * d.d1[i];
    }
    return out;
}

} // namespace pmelab
