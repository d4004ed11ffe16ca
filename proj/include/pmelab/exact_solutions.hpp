#pragma once

// Closed-form Euclidean solutions of u_t = Δu^m used as equality oracles.
//
// Self-similar family: u = t^(-α) P^(1/(m-1)), P = b0 - k r² t^(-2α/n), with
// α = n/(n(m-1)+2) and k = α(m-1)/(2mn). For m > 1 this is the compactly
// supported Barenblatt profile; for 1-2/n < m < 1 k is negative and the
// profile is positive everywhere. In both cases -Δf = α/t with α = N/2.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/geometry.hpp"
#include "pmelab/pme_solver.hpp"

namespace pmelab {

struct SelfSimilarParams {
    int n;
    double m;
    double b0 = 1.0;

    SelfSimilarParams(int n_, double m_, double b0_ = 1.0) : n(n_), m(m_), b0(b0_) {
        if (n < 1) throw ConfigError("self-similar: dimension must be >= 1");
        if (!(static_cast<double>(n) * (m - 1.0) + 2.0 > 0.0))
            throw OutOfRange("self-similar: requires m > 1 - 2/n");
        if (m == 1.0) throw OutOfRange("self-similar: m = 1 is the heat kernel");
        if (!(b0 > 0.0)) throw ConfigError("self-similar: b0 must be positive");
    }

    double alpha() const { return static_cast<double>(n) / (static_cast<double>(n) * (m - 1.0) + 2.0); }
    double beta() const { return alpha() / static_cast<double>(n); }
    double k() const { return alpha() * (m - 1.0) / (2.0 * m * static_cast<double>(n)); }

    /// Radius of the support at time t (m > 1 only).
    double support_radius(double t) const {
        if (!(m > 1.0)) throw OutOfRange("support_radius: profile has no free boundary for m < 1");
        return std::sqrt(b0 * std::pow(t, 2.0 * beta()) / k());
    }

    /// Argument P(t, r) of the power, clipped at zero.
    double profile_base(double t, double r) const {
        return std::max(b0 - k() * r * r * std::pow(t, -2.0 * beta()), 0.0);
    }
};

namespace detail {

inline double self_similar_value(const SelfSimilarParams& p, double t, double r) {
    if (!(t > 0.0)) throw OutOfRange("self-similar: t must be positive");
    const double base = p.profile_base(t, r);
    if (base == 0.0) return 0.0;
    return std::pow(t, -p.alpha()) * std::pow(base, 1.0 / (p.m - 1.0));
}

} // namespace detail

/// Barenblatt solution, m > 1. Zero outside the support.
inline double barenblatt(const SelfSimilarParams& p, double t, double r) {
    if (!(p.m > 1.0)) throw OutOfRange("barenblatt: requires m > 1");
    return detail::self_similar_value(p, t, r);
}

/// Positive self-similar fast-diffusion solution, 1 - 2/n < m < 1.
inline double fast_diffusion_selfsimilar(const SelfSimilarParams& p, double t, double r) {
    if (!(p.m < 1.0)) throw OutOfRange("fast_diffusion_selfsimilar: requires m < 1");
    return detail::self_similar_value(p, t, r);
}

/// (4πt)^(-n/2) exp(-r²/4t).
inline double gaussian_heat_kernel(int n, double t, double r) {
    if (!(t > 0.0)) throw OutOfRange("gaussian_heat_kernel: t must be positive");
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-r * r / (4.0 * t));
}

/// Surface area of the unit (n-1)-sphere.
inline double unit_sphere_area(int n) {
    const double h = 0.5 * static_cast<double>(n);
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// One of the three closed-form families, with analytic first derivatives.
class ReferenceSolution {
public:
    enum class Kind { Barenblatt, FastDiffusion, Gaussian };

    static ReferenceSolution barenblatt(int n, double m, double b0 = 1.0) {
        SelfSimilarParams p(n, m, b0);
        if (!(m > 1.0)) throw OutOfRange("barenblatt: requires m > 1");
        return {Kind::Barenblatt, p};
    }
    static ReferenceSolution fast_diffusion(int n, double m, double b0 = 1.0) {
        SelfSimilarParams p(n, m, b0);
        if (!(m < 1.0)) throw OutOfRange("fast_diffusion: requires m < 1");
        return {Kind::FastDiffusion, p};
    }
    static ReferenceSolution gaussian(int n) { return {Kind::Gaussian, SelfSimilarParams(n, 2.0)}; }

    Kind kind() const noexcept { return kind_; }
    int n() const noexcept { return params_.n; }
    double m() const noexcept { return kind_ == Kind::Gaussian ? 1.0 : params_.m; }
    const SelfSimilarParams& params() const noexcept { return params_; }

    double value(double t, double r) const {
        switch (kind_) {
        case Kind::Barenblatt: return pmelab::barenblatt(params_, t, r);
        case Kind::FastDiffusion: return fast_diffusion_selfsimilar(params_, t, r);
        case Kind::Gaussian: return gaussian_heat_kernel(params_.n, t, r);
        }
        return 0.0;
    }

    double du_dr(double t, double r) const {
        if (kind_ == Kind::Gaussian) return -r / (2.0 * t) * value(t, r);
        const double base = params_.profile_base(t, r);
        if (base == 0.0) return 0.0;
        const double p = 1.0 / (params_.m - 1.0);
        const double scale = std::pow(t, -2.0 * params_.beta());
        return std::pow(t, -params_.alpha()) * p * std::pow(base, p - 1.0) * (-2.0 * params_.k() * r * scale);
    }

    double du_dt(double t, double r) const {
        if (kind_ == Kind::Gaussian)
            return value(t, r) * (-0.5 * params_.n / t + r * r / (4.0 * t * t));
        const double base = params_.profile_base(t, r);
        if (base == 0.0) return 0.0;
        const double p = 1.0 / (params_.m - 1.0);
        const double a = params_.alpha(), b = params_.beta();
        const double dbase_dt = 2.0 * b * params_.k() * r * r * std::pow(t, -2.0 * b - 1.0);
        return -a * std::pow(t, -a - 1.0) * std::pow(base, p) + std::pow(t, -a) * p * std::pow(base, p - 1.0) * dbase_dt;
    }

    /// Exact value of -Δf (self-similar) or |∇f|² - f_t (heat kernel): N/(2t).
    double saturation_value(double t) const {
        if (kind_ == Kind::Gaussian) return 0.5 * params_.n / t;
        return params_.alpha() / t;
    }

private:
    ReferenceSolution(Kind kind, SelfSimilarParams p) : kind_(kind), params_(p) {}

    Kind kind_;
    SelfSimilarParams params_;
};

/// Samples the reference solution on a Euclidean grid at the given times.
inline SolutionTrajectory sample_trajectory(const ReferenceSolution& ref, const RadialGrid& grid,
                                            const std::vector<double>& times) {
    SolutionTrajectory traj{grid, ManifoldModel::euclidean(ref.n()), ref.m(), times, {}};
    traj.snapshots.reserve(times.size());
    for (double t : times) traj.snapshots.push_back(sample(grid, [&](double r) { return ref.value(t, r); }));
    return traj;
}

/// Times t0, t0+dt, ..., t0 + steps*dt.
inline std::vector<double> uniform_times(double t0, double dt, std::size_t steps) {
    std::vector<double> out(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) out[k] = t0 + static_cast<double>(k) * dt;
    return out;
}

} // namespace pmelab
