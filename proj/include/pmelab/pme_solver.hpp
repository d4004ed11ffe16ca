#pragma once

// Backward-Euler finite-volume solver for u_t = Δ u^m on a radial model
// manifold. Fluxes are differences of u^m weighted by A(r)^(n-1) on cell
// faces, so the scheme is conservative and monotone.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/geometry.hpp"
#include "pmelab/grid.hpp"
#include "pmelab/tridiagonal.hpp"

namespace pmelab {

enum class Scheme { ImplicitNewton, SemiImplicit };

struct BoundaryCondition {
    enum class Kind { NeumannZero, DirichletPositive };
    Kind kind = Kind::NeumannZero;
    double value = 0.0;

    static BoundaryCondition neumann() { return {}; }
    static BoundaryCondition dirichlet(double v) { return {Kind::DirichletPositive, v}; }
};

struct SolverConfig {
    double dt = 1e-3;
    double t0 = 0.1;
    double t1 = 1.0;
    Scheme scheme = Scheme::ImplicitNewton;
    double newton_tol = 1e-10;
    int max_newton_iters = 50;
    BoundaryCondition outer_bc{};

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
        if (!(t0 > 0.0)) throw ConfigError("solver: t0 must be positive");
        if (!(t1 > t0)) throw ConfigError("solver: t1 must exceed t0");
        if (!(newton_tol > 0.0)) throw ConfigError("solver: newton_tol must be positive");
        if (max_newton_iters < 1) throw ConfigError("solver: max_newton_iters must be >= 1");
        if (outer_bc.kind == BoundaryCondition::Kind::DirichletPositive && !(outer_bc.value > 0.0))
            throw ConfigError("solver: Dirichlet boundary value must be positive");
    }

    std::size_t steps() const {
        const double ratio = (t1 - t0) / dt;
        const auto n = static_cast<std::size_t>(std::llround(ratio));
        return std::max<std::size_t>(n, 1);
    }
};

/// Time-indexed positive snapshots of one run.
struct SolutionTrajectory {
    RadialGrid grid;
    ManifoldModel model;
    double m;
    std::vector<double> times;
    std::vector<Field> snapshots;

    std::size_t size() const noexcept { return times.size(); }
};

namespace detail {

/// Face weights A(r_{i+1/2})^(n-1) and cell volumes A(r_i)^(n-1) h.
struct FiniteVolumeGeometry {
    std::vector<double> face;    // face[i] = weight at r = i h, i = 0..cells
    std::vector<double> volume;  // volume[i], i = 0..cells-1

    FiniteVolumeGeometry(const ManifoldModel& model, const RadialGrid& grid) {
        if (grid.layout() != GridLayout::CellCentered)
            throw ConfigError("solver: cell-centered grid required");
        const std::size_t n = grid.cells();
        const double h = grid.h();
        face.resize(n + 1);
        volume.resize(n);
        for (std::size_t i = 0; i <= n; ++i) face[i] = model.area_weight(static_cast<double>(i) * h);
        face[0] = 0.0;  // symmetry at the pole (also for n = 1)
        for (std::size_t i = 0; i < n; ++i) volume[i] = model.area_weight(grid.r(i)) * h;
    }
};

inline void require_positive(const Field& v, const char* what, double time) {
    for (double x : v) {
        if (!(x > 0.0)) throw PositivityLoss(std::string(what) + ": non-positive value encountered", time);
    }
}

} // namespace detail

/// Discrete mass sum_i u_i A(r_i)^(n-1) h.
inline double discrete_mass(const ManifoldModel& model, const RadialGrid& grid, const Field& u) {
    const detail::FiniteVolumeGeometry geo(model, grid);
    double mass = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) mass += geo.volume[i] * u[i];
    return mass;
}

/// Implicit stepper bound to one model, grid and configuration.
class PmeStepper {
public:
    PmeStepper(const ManifoldModel& model, const RadialGrid& grid, double m, SolverConfig config)
        : model_(model), grid_(grid), m_(m), config_(config), geo_(model, grid) {
        if (!(m > 0.0)) throw ConfigError("solver: exponent m must be positive");
        config_.validate();
    }

    const SolverConfig& config() const noexcept { return config_; }

    /// One backward-Euler step of size dt from u. Throws PositivityLoss or
    /// NewtonDivergence.
    Field step(const Field& u, double dt) const {
        if (u.size() != grid_.size()) throw ConfigError("solver: field size does not match grid");
        detail::require_positive(u, "step input", 0.0);
        return config_.scheme == Scheme::ImplicitNewton ? newton_step(u, dt) : picard_step(u, dt);
    }

    /// Residual v - u - dt/V (flux differences of v^m), in units of u.
    Field residual(const Field& u, const Field& v, double dt) const {
        const std::size_t n = u.size();
        const double h = grid_.h();
        Field phi(n);
        for (std::size_t i = 0; i < n; ++i) phi[i] = std::pow(v[i], m_);
        Field res(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double right = i + 1 < n ? geo_.face[i + 1] * (phi[i + 1] - phi[i]) / h : outer_flux(phi[n - 1]);
            const double left = i > 0 ? geo_.face[i] * (phi[i] - phi[i - 1]) / h : 0.0;
            res[i] = v[i] - u[i] - dt / geo_.volume[i] * (right - left);
        }
        return res;
    }

private:
    double outer_flux(double phi_last) const {
        if (config_.outer_bc.kind == BoundaryCondition::Kind::NeumannZero) return 0.0;
        const double phi_b = std::pow(config_.outer_bc.value, m_);
        return geo_.face.back() * (phi_b - phi_last) / (0.5 * grid_.h());
    }

    static double max_abs(const Field& v) {
        double out = 0.0;
        for (double x : v) out = std::max(out, std::abs(x));
        return out;
    }

    Field newton_step(const Field& u, double dt) const {
        const std::size_t n = u.size();
        const double h = grid_.h();
        const bool dirichlet = config_.outer_bc.kind == BoundaryCondition::Kind::DirichletPositive;
        Field v = u;
        Field res = residual(u, v, dt);
        for (int iter = 0; iter < config_.max_newton_iters; ++iter) {
            if (max_abs(res) <= config_.newton_tol) return v;

            Tridiagonal jac(n);
            Field dphi(n);
            for (std::size_t i = 0; i < n; ++i) dphi[i] = m_ * std::pow(v[i], m_ - 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double scale = dt / geo_.volume[i];
                const double right = i + 1 < n ? geo_.face[i + 1] / h : (dirichlet ? geo_.face[n] / (0.5 * h) : 0.0);
                const double left = i > 0 ? geo_.face[i] / h : 0.0;
                jac.diag[i] = 1.0 + scale * (right + left) * dphi[i];
                if (i > 0) jac.lower[i] = -scale * left * dphi[i - 1];
                if (i + 1 < n) jac.upper[i] = -scale * right * dphi[i + 1];
            }
            Field rhs(n);
            for (std::size_t i = 0; i < n; ++i) rhs[i] = -res[i];
            const Field delta = solve_tridiagonal(jac, std::move(rhs));

            // Damp the update until the iterate stays positive.
            double lambda = 1.0;
            Field trial(n);
            for (int halving = 0;; ++halving) {
                bool positive = true;
                for (std::size_t i = 0; i < n; ++i) {
                    trial[i] = v[i] + lambda * delta[i];
                    positive = positive && trial[i] > 0.0;
                }
                if (positive) break;
                if (halving == 40) throw PositivityLoss("Newton iterate lost positivity");
                lambda *= 0.5;
            }
            v.swap(trial);
            res = residual(u, v, dt);
        }
        if (max_abs(res) <= config_.newton_tol) return v;
        throw NewtonDivergence("Newton residual " + std::to_string(max_abs(res)) + " after " +
                               std::to_string(config_.max_newton_iters) + " iterations");
    }

    // Picard iteration on the frozen-coefficient form m w^(m-1) ∂r v.
    Field picard_step(const Field& u, double dt) const {
        const std::size_t n = u.size();
        const double h = grid_.h();
        const bool dirichlet = config_.outer_bc.kind == BoundaryCondition::Kind::DirichletPositive;
        const double bc = config_.outer_bc.value;
        Field w = u;
        for (int iter = 0; iter < config_.max_newton_iters; ++iter) {
            Field coef(n);
            for (std::size_t i = 0; i < n; ++i) coef[i] = m_ * std::pow(w[i], m_ - 1.0);
            Tridiagonal a(n);
            Field rhs = u;
            for (std::size_t i = 0; i < n; ++i) {
                const double scale = dt / geo_.volume[i];
                double right = 0.0, left = 0.0;
                if (i + 1 < n) {
                    right = geo_.face[i + 1] * 0.5 * (coef[i] + coef[i + 1]) / h;
                } else if (dirichlet) {
                    right = geo_.face[n] * 0.5 * (coef[i] + m_ * std::pow(bc, m_ - 1.0)) / (0.5 * h);
                    rhs[i] += scale * right * bc;
                }
                if (i > 0) left = geo_.face[i] * 0.5 * (coef[i] + coef[i - 1]) / h;
                a.diag[i] = 1.0 + scale * (right + left);
                if (i > 0) a.lower[i] = -scale * left;
                if (i + 1 < n) a.upper[i] = -scale * right;
            }
            Field next = solve_tridiagonal(a, std::move(rhs));
            detail::require_positive(next, "Picard iterate", 0.0);
            double change = 0.0;
            for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - w[i]));
            w.swap(next);
            if (change <= config_.newton_tol) return w;
        }
        throw NewtonDivergence("Picard iteration did not converge in " +
                               std::to_string(config_.max_newton_iters) + " iterations");
    }

    ManifoldModel model_;
    RadialGrid grid_;
    double m_;
    SolverConfig config_;
    detail::FiniteVolumeGeometry geo_;
};

/// Free-function form of a single step.
inline Field step(const Field& u, double dt, double m, const ManifoldModel& model, const RadialGrid& grid,
                  const BoundaryCondition& bc, Scheme scheme = Scheme::ImplicitNewton) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t0 = 1.0;
    cfg.t1 = 1.0 + dt;
    cfg.scheme = scheme;
    cfg.outer_bc = bc;
    return PmeStepper(model, grid, m, cfg).step(u, dt);
}

/// Snapshots at t0, t0+dt, ..., t1.
inline SolutionTrajectory solve(const Field& initial, const SolverConfig& config, double m,
                                const ManifoldModel& model, const RadialGrid& grid) {
    const PmeStepper stepper(model, grid, m, config);
    detail::require_positive(initial, "initial data", config.t0);
    const std::size_t steps = config.steps();
    SolutionTrajectory traj{grid, model, m, {}, {}};
    traj.times.reserve(steps + 1);
    traj.snapshots.reserve(steps + 1);
    traj.times.push_back(config.t0);
    traj.snapshots.push_back(initial);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = config.t0 + static_cast<double>(k) * config.dt;
        try {
            traj.snapshots.push_back(stepper.step(traj.snapshots.back(), config.dt));
        } catch (const PositivityLoss& e) {
            throw PositivityLoss(std::string(e.what()) + " at t=" + std::to_string(t), t);
        } catch (const NewtonDivergence& e) {
            throw NewtonDivergence(std::string(e.what()) + " at t=" + std::to_string(t), t);
        }
        traj.times.push_back(t);
    }
    return traj;
}

/// max |∂t u - Δ_h u^m| over interior nodes (2 cells from each end) and
/// interior snapshots, with centered time differences. Nodes where
/// u < min_relative_u * max(u) in that snapshot are skipped.
inline double pde_residual(const SolutionTrajectory& traj, double min_relative_u = 0.0,
                           std::size_t boundary_cells = 2) {
    if (traj.size() < 3) throw ConfigError("pde_residual: at least 3 snapshots required");
    const std::size_t n = traj.grid.size();
    if (n <= 2 * boundary_cells) throw ConfigError("pde_residual: grid too small for boundary exclusion");
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
        const Field& u = traj.snapshots[k];
        Field um(n);
        for (std::size_t i = 0; i < n; ++i) um[i] = std::pow(u[i], traj.m);
        const Field lap = radial_laplacian(traj.model, traj.grid, um);
        const double umax = *std::max_element(u.begin(), u.end());
        const double dt2 = traj.times[k + 1] - traj.times[k - 1];
        for (std::size_t i = boundary_cells; i + boundary_cells < n; ++i) {
            if (u[i] < min_relative_u * umax) continue;
            const double ut = (traj.snapshots[k + 1][i] - traj.snapshots[k - 1][i]) / dt2;
            worst = std::max(worst, std::abs(ut - lap[i]));
        }
    }
    return worst;
}

} // namespace pmelab
