#pragma once

// Hopf-transformed quantities of a positive solution:
//   f = m (u^(m-1) - 1)/(m-1)   (log u at m = 1),   U = (m-1) f + m = m u^(m-1),
//   X = |∇f|²/U,   Y = f_t/U,   Z = X - Y,
// and the evolution identities they satisfy under A = U L + 2m ∇f·∇.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pmelab/errors.hpp"
#include "pmelab/exact_solutions.hpp"
#include "pmelab/geometry.hpp"
#include "pmelab/pme_solver.hpp"

namespace pmelab {

inline double hopf_transform(double u, double m) {
    if (!(u > 0.0)) throw NonPositiveInput("hopf_transform: u must be positive");
    if (!(m > 0.0)) throw NonPositiveInput("hopf_transform: m must be positive");
    if (m == 1.0) return std::log(u);
    return m * std::expm1((m - 1.0) * std::log(u)) / (m - 1.0);
}

/// How f_t is obtained for Y.
enum class TimeDerivativeMode {
    TemporalDifference,  ///< centered difference of f between neighbouring snapshots
    PdeIdentity          ///< f_t = U (L_h f + X)
};

struct HopfFields {
    RadialGrid grid;
    double t = 0.0;
    double m = 1.0;
    Field u, f, U, df, gradf2, lap_f, ft, X, Y, Z;
    /// u_r and u_t recovered from f_r, f_t by the inverse chain rule.
    Field du_dr, du_dt;
    /// Interior index range [first, last) on which fields are reported.
    std::size_t first = 0, last = 0;

    explicit HopfFields(RadialGrid g) : grid(std::move(g)) {}

    std::size_t size() const noexcept { return u.size(); }
};

struct MaskPolicy {
    std::size_t boundary_cells = 2;
    /// Points with u < min_relative_u * max(u) are excluded (compact supports).
    double min_relative_u = 0.0;
};

/// Interior mask for one snapshot.
inline std::vector<bool> interior_mask(const HopfFields& fields, const MaskPolicy& policy) {
    std::vector<bool> mask(fields.size(), false);
    const double umax = *std::max_element(fields.u.begin(), fields.u.end());
    for (std::size_t i = policy.boundary_cells; i + policy.boundary_cells < fields.size(); ++i)
        mask[i] = fields.u[i] >= policy.min_relative_u * umax;
    return mask;
}

namespace detail {

inline Field hopf_field(const Field& u, double m) {
    Field f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = hopf_transform(u[i], m);
    return f;
}

inline void finish_fields(HopfFields& out, const ManifoldModel& model) {
    const std::size_t n = out.u.size();
    out.df = radial_derivatives(out.grid, out.f).d1;
    out.lap_f = radial_laplacian(model, out.grid, out.f);
    out.gradf2.resize(n);
    out.X.resize(n);
    out.Y.resize(n);
    out.Z.resize(n);
    out.du_dr.resize(n);
    out.du_dt.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.gradf2[i] = out.df[i] * out.df[i];
        out.X[i] = out.gradf2[i] / out.U[i];
    }
}

inline void finish_time_fields(HopfFields& out) {
    const double m = out.m;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.Y[i] = out.ft[i] / out.U[i];
        out.Z[i] = out.X[i] - out.Y[i];
        const double chain = std::pow(out.u[i], 2.0 - m) / m;  // du/df
        out.du_dr[i] = out.df[i] * chain;
        out.du_dt[i] = out.ft[i] * chain;
    }
}

} // namespace detail

/// Fields of snapshot k. TemporalDifference needs 0 < k < last index.
inline HopfFields compute_fields(const SolutionTrajectory& traj, std::size_t k,
                                 TimeDerivativeMode mode = TimeDerivativeMode::TemporalDifference,
                                 std::size_t boundary_cells = 2) {
    if (k >= traj.size()) throw IndexOutOfRange("compute_fields: snapshot index out of range");
    if (mode == TimeDerivativeMode::TemporalDifference && (k == 0 || k + 1 >= traj.size()))
        throw IndexOutOfRange("compute_fields: temporal differences need neighbouring snapshots");

    const double m = traj.m;
    HopfFields out(traj.grid);
    out.t = traj.times[k];
    out.m = m;
    out.u = traj.snapshots[k];
    for (double x : out.u) {
        if (!(x > 0.0))
            throw NonPositiveSolution("compute_fields: snapshot " + std::to_string(k) + " is not positive");
    }
    const std::size_t n = out.u.size();
    out.first = std::min(boundary_cells, n);
    out.last = n > boundary_cells ? n - boundary_cells : out.first;
    out.f = detail::hopf_field(out.u, m);
    out.U.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.U[i] = m * std::pow(out.u[i], m - 1.0);
    detail::finish_fields(out, traj.model);

    out.ft.resize(n);
    if (mode == TimeDerivativeMode::TemporalDifference) {
        const Field fp = detail::hopf_field(traj.snapshots[k + 1], m);
        const Field fm = detail::hopf_field(traj.snapshots[k - 1], m);
        const double dt2 = traj.times[k + 1] - traj.times[k - 1];
        for (std::size_t i = 0; i < n; ++i) out.ft[i] = (fp[i] - fm[i]) / dt2;
    } else {
        for (std::size_t i = 0; i < n; ++i) out.ft[i] = out.U[i] * (out.lap_f[i] + out.X[i]);
    }
    detail::finish_time_fields(out);
    return out;
}

/// Fields of every snapshot whose time derivative is available.
inline std::vector<HopfFields> compute_all_fields(const SolutionTrajectory& traj,
                                                  TimeDerivativeMode mode = TimeDerivativeMode::TemporalDifference,
                                                  std::size_t boundary_cells = 2) {
    std::vector<HopfFields> out;
    const bool central = mode == TimeDerivativeMode::TemporalDifference;
    if (central && traj.size() < 3) throw ConfigError("compute_all_fields: at least 3 snapshots required");
    const std::size_t begin = central ? 1 : 0, end = central ? traj.size() - 1 : traj.size();
    out.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) out.push_back(compute_fields(traj, k, mode, boundary_cells));
    return out;
}

/// Fields of a reference solution at time t with X, Y from analytic
/// derivatives; f, U and L_h f still come from the sampled grid values.
inline HopfFields compute_fields_analytic(const ReferenceSolution& ref, const RadialGrid& grid, double t,
                                          std::size_t boundary_cells = 2) {
    const double m = ref.m();
    HopfFields out(grid);
    out.t = t;
    out.m = m;
    out.u = sample(grid, [&](double r) { return ref.value(t, r); });
    const std::size_t n = out.u.size();
    out.first = std::min(boundary_cells, n);
    out.last = n > boundary_cells ? n - boundary_cells : out.first;
    out.f = detail::hopf_field(out.u, m);
    out.U.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.U[i] = m * std::pow(out.u[i], m - 1.0);
    detail::finish_fields(out, ManifoldModel::euclidean(ref.n()));
    out.ft.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.r(i);
        const double dfdu = m * std::pow(out.u[i], m - 2.0);
        out.df[i] = dfdu * ref.du_dr(t, r);
        out.gradf2[i] = out.df[i] * out.df[i];
        out.X[i] = out.gradf2[i] / out.U[i];
        out.ft[i] = dfdu * ref.du_dt(t, r);
    }
    detail::finish_time_fields(out);
    return out;
}

/// A g = U L_h g + 2m ⟨∇f, ∇g⟩.
inline Field apply_A(const HopfFields& fields, const Field& g, const ManifoldModel& model) {
    const Field lg = radial_laplacian(model, fields.grid, g);
    const Field dg = radial_derivatives(fields.grid, g).d1;
    Field out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = fields.U[i] * lg[i] + 2.0 * fields.m * fields.df[i] * dg[i];
    return out;
}

struct EvolutionResiduals {
    double resU = 0.0;  ///< max |(A-∂t)U - (2m-1)(m-1) U X|
    double resY = 0.0;  ///< max |(A-∂t)Y + (m-1) Y²|
    double resZ = 0.0;  ///< max |(A-∂t)Z - 2Γ₂(f,f) - (m-1) Z²|
    /// min of (A-∂t)Z - (2/N)Z² + 2KU(Z+Y); nonnegative up to discretization.
    double min_slack_linear = std::numeric_limits<double>::infinity();
    /// Same with the curvature term written as 2KU(Z+Y)².
    double min_slack_squared = std::numeric_limits<double>::infinity();
    std::size_t points = 0;
};

/// Residuals of the evolution identities at snapshot k, with time
/// derivatives of U, Y, Z from centered differences of fields at k±1.
inline EvolutionResiduals evolution_residuals(const SolutionTrajectory& traj, std::size_t k,
                                              const ManifoldModel& model,
                                              TimeDerivativeMode mode = TimeDerivativeMode::TemporalDifference,
                                              const MaskPolicy& policy = {}) {
    const std::size_t guard = mode == TimeDerivativeMode::TemporalDifference ? 2 : 1;
    if (k < guard || k + guard >= traj.size())
        throw IndexOutOfRange("evolution_residuals: snapshot index too close to the ends");

    const HopfFields prev = compute_fields(traj, k - 1, mode, policy.boundary_cells);
    const HopfFields cur = compute_fields(traj, k, mode, policy.boundary_cells);
    const HopfFields next = compute_fields(traj, k + 1, mode, policy.boundary_cells);
    const double dt2 = next.t - prev.t;
    const double m = traj.m;
    const double n = model.dim();
    const double K = model.cd_constant();
    const double two_over_N = 2.0 / n + m - 1.0;

    const Field AU = apply_A(cur, cur.U, model);
    const Field AY = apply_A(cur, cur.Y, model);
    const Field AZ = apply_A(cur, cur.Z, model);
    const Field g2 = gamma2_radial(model, cur.grid, cur.f);
    const auto mask = interior_mask(cur, policy);

    EvolutionResiduals out;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        if (!mask[i]) continue;
        const double dU = (next.U[i] - prev.U[i]) / dt2;
        const double dY = (next.Y[i] - prev.Y[i]) / dt2;
        const double dZ = (next.Z[i] - prev.Z[i]) / dt2;
        const double U = cur.U[i], X = cur.X[i], Y = cur.Y[i], Z = cur.Z[i];
        out.resU = std::max(out.resU, std::abs(AU[i] - dU - (2.0 * m - 1.0) * (m - 1.0) * U * X));
        out.resY = std::max(out.resY, std::abs(AY[i] - dY + (m - 1.0) * Y * Y));
        const double heatZ = AZ[i] - dZ;
        out.resZ = std::max(out.resZ, std::abs(heatZ - 2.0 * g2[i] - (m - 1.0) * Z * Z));
        if (two_over_N > 0.0) {
            const double base = heatZ - two_over_N * Z * Z;
            out.min_slack_linear = std::min(out.min_slack_linear, base + 2.0 * K * U * (Z + Y));
            out.min_slack_squared = std::min(out.min_slack_squared, base + 2.0 * K * U * (Z + Y) * (Z + Y));
        }
        ++out.points;
    }
    return out;
}

} // namespace pmelab
