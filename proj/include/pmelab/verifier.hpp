#pragma once

// Pointwise evaluation of the gradient estimates over Hopf fields.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmelab/bounds.hpp"
#include "pmelab/errors.hpp"
#include "pmelab/geometry.hpp"
#include "pmelab/hopf.hpp"

namespace pmelab {

enum class CheckId { ThmA1, ThmA2, ThmB, AB_Classical, LiYau_K0, CD_Condition, FamilyBound };

inline std::string to_string(CheckId id) {
    switch (id) {
    case CheckId::ThmA1: return "thm_a1";
    case CheckId::ThmA2: return "thm_a2";
    case CheckId::ThmB: return "thm_b";
    case CheckId::AB_Classical: return "ab_classical";
    case CheckId::LiYau_K0: return "li_yau";
    case CheckId::CD_Condition: return "cd_condition";
    case CheckId::FamilyBound: return "family_bound";
    }
    return "unknown";
}

inline std::optional<CheckId> check_from_string(const std::string& s) {
    for (CheckId id : {CheckId::ThmA1, CheckId::ThmA2, CheckId::ThmB, CheckId::AB_Classical, CheckId::LiYau_K0,
                       CheckId::CD_Condition, CheckId::FamilyBound}) {
        if (to_string(id) == s) return id;
    }
    return std::nullopt;
}

struct PointRecord {
    double t, r, u, f, U, X, Y, Z;
    double bound;
    double margin;
    double tol;
    /// Regime (1 or 2) for thm_b, y-sample index for family_bound, else 0.
    int regime = 0;
};

struct RegimeSummary {
    int regime = 0;
    std::size_t points = 0;
    double min_margin = std::numeric_limits<double>::infinity();
};

struct VerificationReport {
    CheckId check_id{};
    BoundParams params{};
    std::vector<PointRecord> points;  ///< masked points only
    std::size_t masked_out = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    /// min over points of margin / max(|bound|, N/2t).
    double min_scaled_margin = std::numeric_limits<double>::infinity();
    double tolerance = 1e-3;  ///< relative tolerance applied pointwise
    bool pass = true;
    std::vector<RegimeSummary> regimes;
    std::vector<std::string> notes;
    /// thm_a1 only: max relative gap between X - Y and the u-form left side.
    std::optional<double> identity_gap;

    void add(PointRecord p, double scale) {
        min_margin = std::min(min_margin, p.margin);
        min_scaled_margin = std::min(min_scaled_margin, p.margin / scale);
        if (p.margin < -p.tol) pass = false;
        if (p.regime > 0 && (check_id == CheckId::ThmB || check_id == CheckId::FamilyBound)) {
            auto it = std::find_if(regimes.begin(), regimes.end(), [&](const RegimeSummary& r) { return r.regime == p.regime; });
            if (it == regimes.end()) {
                regimes.push_back({p.regime});
                it = regimes.end() - 1;
            }
            ++it->points;
            it->min_margin = std::min(it->min_margin, p.margin);
        }
        points.push_back(p);
    }
};

struct CheckOptions {
    /// Pointwise tolerance is tol_scale * max(|bound|, N/(2t)).
    double tol_scale = 1e-3;
    MaskPolicy mask{};
    /// Time at which the solution starts; bounds use t - time_origin.
    double time_origin = 0.0;
};

namespace detail {

inline PointRecord make_record(const HopfFields& f, std::size_t i, double tau) {
    return {tau, f.grid.r(i), f.u[i], f.f[i], f.U[i], f.X[i], f.Y[i], f.Z[i], 0.0, 0.0, 0.0, 0};
}

inline void require_fields(std::span<const HopfFields> fields) {
    if (fields.empty()) throw ConfigError("verifier: no snapshots supplied");
}

/// K * sup U over the masked space-time points.
inline double estimate_R(std::span<const HopfFields> fields, double K, const CheckOptions& opts) {
    double umax = 0.0;
    for (const auto& f : fields) {
        const auto mask = interior_mask(f, opts.mask);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (mask[i]) umax = std::max(umax, f.U[i]);
    }
    return K * umax;
}

inline const char* kR_note =
    "R is the supremum of K*U over the computed interior space-time grid, an approximation of the global supremum";

template <class Visit>
void for_each_point(std::span<const HopfFields> fields, const CheckOptions& opts, VerificationReport& report,
                    Visit&& visit) {
    for (const auto& f : fields) {
        const double tau = f.t - opts.time_origin;
        const auto mask = interior_mask(f, opts.mask);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!mask[i] || !(tau > 0.0)) {
                ++report.masked_out;
                continue;
            }
            visit(f, i, tau);
        }
    }
}

} // namespace detail

/// m |∇u|²/u^(3-m) - u_t/u <= N/2t + 2Km u^(m-1)/((1-m)(2m-1)).
inline VerificationReport check_thm_a1(std::span<const HopfFields> fields, const ManifoldModel& model, double m,
                                       const CheckOptions& opts = {}) {
    detail::require_fields(fields);
    const double n = model.dim();
    if (!(m > 0.5 && m < 1.0 && m > 1.0 - 2.0 / n))
        throw OutOfRange("check_thm_a1: requires max(1/2, 1-2/n) < m < 1");
    VerificationReport rep;
    rep.check_id = CheckId::ThmA1;
    rep.tolerance = opts.tol_scale;
    rep.params = {m, n, n_effective(n, m), model.cd_constant(), 0.0};
    double identity_gap = 0.0;
    detail::for_each_point(fields, opts, rep, [&](const HopfFields& f, std::size_t i, double tau) {
        const double u = f.u[i];
        const double lhs = f.X[i] - f.Y[i];
        const double lhs_u = m * f.du_dr[i] * f.du_dr[i] / std::pow(u, 3.0 - m) - f.du_dt[i] / u;
        identity_gap = std::max(identity_gap, std::abs(lhs - lhs_u) / (1.0 + std::abs(lhs)));
        auto rec = detail::make_record(f, i, tau);
        rec.bound = thm_a1_rhs(tau, u, m, n, rep.params.K);
        rec.margin = rec.bound - lhs;
        const double scale = std::max(std::abs(rec.bound), 0.5 * rep.params.N / tau);
        rec.tol = opts.tol_scale * scale;
        rep.add(rec, scale);
    });
    rep.identity_gap = identity_gap;
    rep.notes.push_back("identity |(X-Y) - (m|u_r|^2/u^(3-m) - u_t/u)| relative max = " + std::to_string(identity_gap));
    return rep;
}

/// X - Y <= (2(t - t_first)/N + 1/c)^(-1), c = max Z on the first snapshot.
/// The first snapshot plays the role of time 0.
inline VerificationReport check_thm_a2(std::span<const HopfFields> fields, const ManifoldModel& model, double m,
                                       const CheckOptions& opts = {}, std::optional<double> c_override = {}) {
    detail::require_fields(fields);
    if (model.cd_constant() != 0.0) throw ModelNotFlat("check_thm_a2: requires K = 0");
    const double n = model.dim();
    const double N = n_effective(n, m);
    double c = 0.0;
    if (c_override) {
        c = *c_override;
    } else {
        const auto& first = fields.front();
        const auto mask = interior_mask(first, opts.mask);
        for (std::size_t i = 0; i < first.size(); ++i)
            if (mask[i]) c = std::max(c, first.Z[i]);
    }
    VerificationReport rep;
    rep.check_id = CheckId::ThmA2;
    rep.tolerance = opts.tol_scale;
    rep.params = {m, n, N, 0.0, 0.0, c};
    CheckOptions shifted = opts;
    shifted.time_origin = fields.front().t;
    double display_min = std::numeric_limits<double>::infinity();
    detail::for_each_point(fields, shifted, rep, [&](const HopfFields& f, std::size_t i, double tau) {
        auto rec = detail::make_record(f, i, f.t - opts.time_origin);
        rec.bound = thm_a2_rhs(tau, c, N);
        rec.margin = rec.bound - f.Z[i];
        display_min = std::min(display_min, thm_a2_rhs_display_variant(tau, c, N) - f.Z[i]);
        const double scale = std::max(std::abs(rec.bound), 0.5 * N / (f.t - opts.time_origin));
        rec.tol = opts.tol_scale * scale;
        rep.add(rec, scale);
    });
    rep.notes.push_back("c = " + std::to_string(c) + " taken from the first snapshot at t = " + std::to_string(fields.front().t));
    rep.notes.push_back("display variant c/((N/2t)c+1): min margin = " + std::to_string(display_min));
    return rep;
}

/// Regime 1 (Y > -NR/4): X <= Q(t, Y). Regime 2: X - Y <= N/2t + NR/2.
inline VerificationReport check_thm_b(std::span<const HopfFields> fields, const ManifoldModel& model, double m,
                                      const CheckOptions& opts = {}) {
    detail::require_fields(fields);
    if (!(m > 1.0)) throw OutOfRange("check_thm_b: requires m > 1");
    const double n = model.dim();
    const double N = n_effective(n, m);
    const double K = model.cd_constant();
    const double R = detail::estimate_R(fields, K, opts);
    VerificationReport rep;
    rep.check_id = CheckId::ThmB;
    rep.tolerance = opts.tol_scale;
    rep.params = {m, n, N, K, R};
    rep.regimes = {{1}, {2}};
    const double threshold = -0.25 * N * R;
    const double printed_threshold = -0.25 * n * R;
    std::size_t disagreements = 0;
    detail::for_each_point(fields, opts, rep, [&](const HopfFields& f, std::size_t i, double tau) {
        auto rec = detail::make_record(f, i, tau);
        const double Y = f.Y[i];
        double scale = 0.5 * N / tau;
        if (Y > threshold) {
            rec.regime = 1;
            rec.bound = bigQ(tau, Y, N, R);
            rec.margin = rec.bound - f.X[i];
            scale = std::max(scale, std::abs(capC(tau, Y, N, R)));
        } else {
            rec.regime = 2;
            rec.bound = 0.5 * N / tau + 0.5 * N * R;
            rec.margin = rec.bound - (f.X[i] - Y);
            scale = std::max(scale, std::abs(rec.bound));
        }
        if ((Y > threshold) != (Y > printed_threshold)) ++disagreements;
        rec.tol = opts.tol_scale * scale;
        rep.add(rec, scale);
    });
    rep.notes.push_back(detail::kR_note);
    rep.notes.push_back("regime threshold -NR/4 used; points classified differently by -nR/4: " +
                        std::to_string(disagreements));
    return rep;
}

/// X - Y <= C(t,y) + ∂yC(t,y) (Y - y) for each sampled y >= -NR/4.
inline VerificationReport check_family_bound(std::span<const HopfFields> fields, const ManifoldModel& model, double m,
                                             const std::vector<double>& y_samples, const CheckOptions& opts = {}) {
    detail::require_fields(fields);
    if (!(m > 1.0)) throw OutOfRange("check_family_bound: requires m > 1");
    const double n = model.dim();
    const double N = n_effective(n, m);
    const double K = model.cd_constant();
    const double R = detail::estimate_R(fields, K, opts);
    for (double y : y_samples)
        if (y < -0.25 * N * R - 1e-14 * (1.0 + N * R)) throw OutOfRange("check_family_bound: y below -NR/4");
    VerificationReport rep;
    rep.check_id = CheckId::FamilyBound;
    rep.tolerance = opts.tol_scale;
    rep.params = {m, n, N, K, R};
    detail::for_each_point(fields, opts, rep, [&](const HopfFields& f, std::size_t i, double tau) {
        for (std::size_t s = 0; s < y_samples.size(); ++s) {
            const double y = std::max(y_samples[s], -0.25 * N * R);
            auto rec = detail::make_record(f, i, tau);
            rec.regime = static_cast<int>(s) + 1;
            rec.bound = capC(tau, y, N, R) + dC_dy(tau, y, N, R) * (f.Y[i] - y);
            rec.margin = rec.bound - f.Z[i];
            const double scale = std::max(std::abs(rec.bound), 0.5 * N / tau);
            rec.tol = opts.tol_scale * scale;
            rep.add(rec, scale);
        }
    });
    rep.notes.push_back(detail::kR_note);
    return rep;
}

/// -Δf <= N/2t on flat space.
inline VerificationReport check_aronson_benilan(std::span<const HopfFields> fields, const ManifoldModel& model,
                                                double m, const CheckOptions& opts = {}) {
    detail::require_fields(fields);
    if (model.cd_constant() != 0.0) throw ModelNotFlat("check_aronson_benilan: requires K = 0");
    const double n = model.dim();
    const double N = n_effective(n, m);
    VerificationReport rep;
    rep.check_id = CheckId::AB_Classical;
    rep.tolerance = opts.tol_scale;
    rep.params = {m, n, N, 0.0, 0.0};
    detail::for_each_point(fields, opts, rep, [&](const HopfFields& f, std::size_t i, double tau) {
        auto rec = detail::make_record(f, i, tau);
        rec.bound = 0.5 * N / tau;
        rec.margin = rec.bound - f.Z[i];
        rec.tol = opts.tol_scale * rec.bound;
        rep.add(rec, rec.bound);
    });
    return rep;
}

/// |∇f|² - f_t <= n/2t for the heat equation on flat space.
inline VerificationReport check_li_yau(std::span<const HopfFields> fields, const ManifoldModel& model,
                                       const CheckOptions& opts = {}) {
    detail::require_fields(fields);
    const double m = fields.front().m;
    if (m != 1.0) throw OutOfRange("check_li_yau: requires m = 1");
    if (model.cd_constant() != 0.0) throw ModelNotFlat("check_li_yau: requires K = 0");
    const double n = model.dim();
    VerificationReport rep;
    rep.check_id = CheckId::LiYau_K0;
    rep.tolerance = opts.tol_scale;
    rep.params = {1.0, n, n, 0.0, 0.0};
    detail::for_each_point(fields, opts, rep, [&](const HopfFields& f, std::size_t i, double tau) {
        auto rec = detail::make_record(f, i, tau);
        rec.bound = 0.5 * n / tau;
        rec.margin = rec.bound - (f.gradf2[i] - f.ft[i]);
        rec.tol = opts.tol_scale * rec.bound;
        rep.add(rec, rec.bound);
    });
    return rep;
}

/// Γ₂(f,f) >= (Lf)²/n - K|∇f|² pointwise. The bound column holds the
/// right-hand side; tolerance is relative to the sum of term magnitudes.
inline VerificationReport check_cd(std::span<const HopfFields> fields, const ManifoldModel& model,
                                   const CheckOptions& opts = {}) {
    detail::require_fields(fields);
    const double n = model.dim();
    const double K = model.cd_constant();
    VerificationReport rep;
    rep.check_id = CheckId::CD_Condition;
    rep.tolerance = opts.tol_scale;
    rep.params = {fields.front().m, n, 0.0, K, 0.0};
    for (const auto& f : fields) {
        const Field g2 = gamma2_radial(model, f.grid, f.f);
        const Field defect = cd_defect(model, f.grid, f.f);
        const double tau = f.t - opts.time_origin;
        const auto mask = interior_mask(f, opts.mask);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!mask[i]) {
                ++rep.masked_out;
                continue;
            }
            auto rec = detail::make_record(f, i, tau);
            rec.bound = g2[i] - defect[i];
            rec.margin = defect[i];
            const double scale = std::max(std::abs(g2[i]) + f.lap_f[i] * f.lap_f[i] / n + K * f.gradf2[i],
                                          std::numeric_limits<double>::min());
            rec.tol = opts.tol_scale * scale;
            rep.add(rec, scale);
        }
    }
    return rep;
}

} // namespace pmelab
