#pragma once

// Scenario execution and report files (summary.json, CSV tables).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "pmelab/bounds.hpp"
#include "pmelab/errors.hpp"
#include "pmelab/exact_solutions.hpp"
#include "pmelab/hopf.hpp"
#include "pmelab/pme_solver.hpp"
#include "pmelab/scenario.hpp"
#include "pmelab/verifier.hpp"

namespace pmelab {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitSolver = 3 };

/// Exit status for an exception escaping a run.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const SolverError*>(&e) || dynamic_cast<const NonPositiveSolution*>(&e)) return kExitSolver;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const OutOfRange*>(&e) ||
        dynamic_cast<const ModelNotFlat*>(&e) || dynamic_cast<const NonPositiveInput*>(&e) ||
        dynamic_cast<const nlohmann::json::exception*>(&e))
        return kExitConfig;
    return kExitSolver;
}

/// 17 significant digits, independent of the locale.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }

    CsvWriter& cell(const std::string& s) {
        sep();
        out_ << s;
        return *this;
    }
    CsvWriter& cell(double v) { return cell(format_number(v)); }
    CsvWriter& cell(int v) { return cell(std::to_string(v)); }
    void end_row() {
        out_ << '\n';
        first_ = true;
    }

private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }

    std::ofstream out_;
    bool first_ = true;
};

namespace detail {

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

inline void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline std::vector<double> log_spaced(double a, double b, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

} // namespace detail

/// Snapshots of the scenario: sampled closed form or a solver run.
inline SolutionTrajectory build_trajectory(const Scenario& s) {
    const RadialGrid grid = s.grid();
    const auto model = s.model();
    const auto ref = s.reference();
    if (s.source == DataSource::Exact) {
        const auto times = uniform_times(s.t0, s.dt, s.steps());
        if (ref) return sample_trajectory(*ref, grid, times);
        SolutionTrajectory traj{grid, model, s.m, times, {}};
        traj.snapshots.assign(times.size(), Field(grid.size(), s.initial.value));
        return traj;
    }
    Field u0;
    switch (s.initial.kind) {
    case InitialKind::Constant: u0.assign(grid.size(), s.initial.value); break;
    case InitialKind::Bump: {
        const auto& in = s.initial;
        u0 = sample(grid, [&](double r) { return in.floor + in.amplitude * std::exp(-(r / in.width) * (r / in.width)); });
        break;
    }
    default: u0 = sample(grid, [&](double r) { return ref->value(s.t0, r); }); break;
    }
    return solve(u0, s.solver_config(), s.m, model, grid);
}

inline std::vector<double> resolve_y_samples(const Scenario& s, double N, double R) {
    std::vector<double> ys = s.y_samples;
    for (double k : s.y_samples_nr) ys.push_back(k * N * R);
    return ys;
}

inline VerificationReport run_check(CheckId id, const Scenario& s, std::span<const HopfFields> fields) {
    const auto model = s.model();
    const auto opts = s.check_options();
    switch (id) {
    case CheckId::ThmA1: return check_thm_a1(fields, model, s.m, opts);
    case CheckId::ThmA2: return check_thm_a2(fields, model, s.m, opts, s.thm_a2_c);
    case CheckId::ThmB: return check_thm_b(fields, model, s.m, opts);
    case CheckId::FamilyBound: {
        const double N = n_effective(s.n, s.m);
        const double R = detail::estimate_R(fields, model.cd_constant(), opts);
        return check_family_bound(fields, model, s.m, resolve_y_samples(s, N, R), opts);
    }
    case CheckId::AB_Classical: return check_aronson_benilan(fields, model, s.m, opts);
    case CheckId::LiYau_K0: return check_li_yau(fields, model, opts);
    case CheckId::CD_Condition: return check_cd(fields, model, opts);
    }
    throw ConfigError("unknown check");
}

inline json report_json(const VerificationReport& rep) {
    json j;
    j["id"] = to_string(rep.check_id);
    const auto& p = rep.params;
    j["params"] = {{"m", p.m}, {"n", p.n}, {"N", p.N}, {"K", p.K}, {"R", p.R}, {"c", detail::finite_or_null(p.c)}};
    j["points"] = rep.points.size();
    j["masked_out"] = rep.masked_out;
    j["min_margin"] = detail::finite_or_null(rep.min_margin);
    j["min_scaled_margin"] = detail::finite_or_null(rep.min_scaled_margin);
    j["tolerance_scale"] = rep.tolerance;
    j["pass"] = rep.pass;
    if (!rep.regimes.empty()) {
        json regimes = json::array();
        for (const auto& r : rep.regimes)
            regimes.push_back({{"regime", r.regime}, {"points", r.points}, {"min_margin", detail::finite_or_null(r.min_margin)}});
        j["regimes"] = regimes;
    }
    if (rep.identity_gap) j["identity_gap"] = *rep.identity_gap;
    j["notes"] = rep.notes;
    return j;
}

inline const std::vector<std::string>& points_header() {
    static const std::vector<std::string> h{"check", "t", "r", "u", "f", "U", "X", "Y", "Z", "bound", "margin", "regime"};
    return h;
}

inline void write_points(CsvWriter& csv, const VerificationReport& rep) {
    const std::string id = to_string(rep.check_id);
    for (const auto& p : rep.points) {
        csv.cell(id).cell(p.t).cell(p.r).cell(p.u).cell(p.f).cell(p.U).cell(p.X).cell(p.Y).cell(p.Z);
        csv.cell(p.bound).cell(p.margin).cell(p.regime);
        csv.end_row();
    }
}

struct RunResult {
    int exit_code = kExitPass;
    json summary;
    std::vector<VerificationReport> reports;
};

inline json scenario_json(const Scenario& s) {
    return {{"name", s.name},
            {"manifold", {{"kind", to_string(s.manifold)}, {"n", s.n}, {"kappa", s.kappa}}},
            {"m", s.m},
            {"grid", {{"r_max", s.resolved_r_max()}, {"cells", s.cells}}},
            {"time", {{"t0", s.t0}, {"t1", s.t1}, {"dt", s.dt}, {"origin", s.origin()}}},
            {"initial", to_string(s.initial.kind)},
            {"source", s.source == DataSource::Exact ? "exact" : "solver"}};
}

/// Runs every check of the scenario. Writes summary.json and points.csv
/// when out_dir is non-empty.
inline RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir = {}) {
    if (s.checks.empty()) throw ConfigError("scenario: no checks requested");
    const auto traj = build_trajectory(s);
    const auto fields = compute_all_fields(traj, s.fields_mode, s.mask.boundary_cells);
    RunResult result;
    result.summary["scenario"] = scenario_json(s);
    json checks = json::array();
    for (CheckId id : s.checks) {
        auto rep = run_check(id, s, fields);
        if (rep.points.empty()) {
            rep.pass = false;
            rep.notes.push_back("no interior points survived the mask");
        }
        if (!rep.pass) result.exit_code = kExitCheckFailed;
        checks.push_back(report_json(rep));
        result.reports.push_back(std::move(rep));
    }
    result.summary["checks"] = checks;
    result.summary["pass"] = result.exit_code == kExitPass;
    result.summary["exit_code"] = result.exit_code;
    if (!out_dir.empty()) {
        detail::ensure_dir(out_dir);
        detail::write_json(out_dir / "summary.json", result.summary);
        CsvWriter csv(out_dir / "points.csv", points_header());
        for (const auto& rep : result.reports) write_points(csv, rep);
    }
    return result;
}

/// Trajectory only: trajectory.csv (t, r, u) and a summary with mass and
/// the PDE residual of the snapshots.
inline json run_solve(const Scenario& s, const std::filesystem::path& out_dir) {
    const auto traj = build_trajectory(s);
    json summary;
    summary["scenario"] = scenario_json(s);
    summary["snapshots"] = traj.size();
    summary["mass_first"] = discrete_mass(traj.model, traj.grid, traj.snapshots.front());
    summary["mass_last"] = discrete_mass(traj.model, traj.grid, traj.snapshots.back());
    summary["pde_residual"] = traj.size() >= 3 ? pde_residual(traj, s.mask.min_relative_u, s.mask.boundary_cells) : 0.0;
    double umin = std::numeric_limits<double>::infinity();
    for (const auto& snap : traj.snapshots)
        for (double v : snap) umin = std::min(umin, v);
    summary["min_u"] = umin;
    if (!out_dir.empty()) {
        detail::ensure_dir(out_dir);
        detail::write_json(out_dir / "summary.json", summary);
        CsvWriter csv(out_dir / "trajectory.csv", {"t", "r", "u"});
        for (std::size_t k = 0; k < traj.size(); ++k)
            for (std::size_t i = 0; i < traj.grid.size(); ++i) {
                csv.cell(traj.times[k]).cell(traj.grid.r(i)).cell(traj.snapshots[k][i]);
                csv.end_row();
            }
    }
    return summary;
}

/// Closed-form fields with grid and analytic derivatives, compared with
/// the saturation value N/(2t).
inline json run_exact(const Scenario& s, const std::filesystem::path& out_dir) {
    const auto ref = s.reference();
    if (!ref) throw ConfigError("exact: initial.kind must be barenblatt, fast_diffusion or gaussian");
    const RadialGrid grid = s.grid();
    const auto traj = sample_trajectory(*ref, grid, uniform_times(s.t0, s.dt, s.steps()));
    const auto fields = compute_all_fields(traj, s.fields_mode, s.mask.boundary_cells);
    double err_grid = 0.0, err_analytic = 0.0;
    std::unique_ptr<CsvWriter> csv;
    if (!out_dir.empty()) {
        detail::ensure_dir(out_dir);
        csv = std::make_unique<CsvWriter>(out_dir / "exact.csv",
                                          std::vector<std::string>{"t", "r", "u", "f", "X", "Y", "Z", "Z_analytic",
                                                                   "saturation", "error_grid", "error_analytic"});
    }
    for (const auto& f : fields) {
        const auto a = compute_fields_analytic(*ref, grid, f.t, s.mask.boundary_cells);
        const double target = ref->saturation_value(f.t);
        const auto mask = interior_mask(f, s.mask);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!mask[i]) continue;
            const double eg = f.Z[i] / target - 1.0, ea = a.Z[i] / target - 1.0;
            err_grid = std::max(err_grid, std::abs(eg));
            err_analytic = std::max(err_analytic, std::abs(ea));
            if (csv) {
                csv->cell(f.t).cell(grid.r(i)).cell(f.u[i]).cell(f.f[i]).cell(f.X[i]).cell(f.Y[i]).cell(f.Z[i]);
                csv->cell(a.Z[i]).cell(target).cell(eg).cell(ea);
                csv->end_row();
            }
        }
    }
    json summary;
    summary["scenario"] = scenario_json(s);
    summary["saturation_error_grid"] = err_grid;
    summary["saturation_error_analytic"] = err_analytic;
    if (!out_dir.empty()) detail::write_json(out_dir / "summary.json", summary);
    return summary;
}

/// Tabulates C, ∂yC and Q and reports the Riccati residual per y.
inline json run_bounds(const Scenario& s, const std::filesystem::path& out_dir) {
    const double N = s.bounds.N.value_or(n_effective(s.n, s.m));
    const double R = s.bounds.R.value_or(s.model().cd_constant() * s.m);
    const auto ts = s.bounds.t.empty() ? detail::log_spaced(0.1, 10.0, 25) : s.bounds.t;
    auto ys = s.bounds.y;
    if (ys.empty()) ys = {-0.25 * N * R, 0.0, N * R, 4.0 * N * R};
    for (double y : ys)
        if (y < -0.25 * N * R) throw ConfigError("bounds: y below -NR/4");
    std::unique_ptr<CsvWriter> csv;
    if (!out_dir.empty()) {
        detail::ensure_dir(out_dir);
        csv = std::make_unique<CsvWriter>(out_dir / "bounds.csv",
                                          std::vector<std::string>{"t", "y", "w", "C", "dC_dy", "Q"});
    }
    json riccati = json::array();
    for (double y : ys) {
        for (double t : ts) {
            if (csv) {
                csv->cell(t).cell(y).cell(w_fn(t, y, N, R)).cell(capC(t, y, N, R)).cell(dC_dy(t, y, N, R));
                csv->cell(bigQ(t, y, N, R));
                csv->end_row();
            }
        }
        const double res = ts.size() >= 2 ? riccati_residual(ts, y, N, R) : 0.0;
        riccati.push_back({{"y", y}, {"residual", res}});
    }
    json summary;
    summary["N"] = N;
    summary["R"] = R;
    summary["riccati"] = riccati;
    if (!out_dir.empty()) detail::write_json(out_dir / "summary.json", summary);
    return summary;
}

struct ConvergenceLevel {
    std::size_t cells = 0;
    double dt = 0.0;
    double eval_time = 0.0;
    EvolutionResiduals residuals;
    double saturation_error = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<CheckId, double>> min_margins;
};

struct ConvergenceResult {
    std::vector<ConvergenceLevel> levels;
    /// log2 ratios between consecutive levels; NaN where undefined.
    std::vector<double> order_U, order_Y, order_Z, order_saturation;
};

inline double observed_order(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0) || !std::isfinite(coarse) || !std::isfinite(fine))
        return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse / fine);
}

/// Halves h and dt per level. Residuals are evaluated at the fixed time
/// t0 + 2 dt of the coarsest level.
inline ConvergenceResult run_convergence(const Scenario& base, int levels, const std::filesystem::path& out_dir = {}) {
    if (levels < 2) throw ConfigError("convergence: levels must be >= 2");
    if (base.steps() < 4) throw ConfigError("convergence: at least four coarse time steps are required");
    ConvergenceResult out;
    for (int l = 0; l < levels; ++l) {
        Scenario s = base;
        const std::size_t factor = std::size_t{1} << l;
        s.cells = base.cells * factor;
        s.dt = base.dt / static_cast<double>(factor);
        const auto traj = build_trajectory(s);
        const std::size_t k = 2 * factor;
        ConvergenceLevel lvl;
        lvl.cells = s.cells;
        lvl.dt = s.dt;
        lvl.eval_time = traj.times[k];
        lvl.residuals = evolution_residuals(traj, k, traj.model, s.fields_mode, s.mask);
        const auto fields = compute_all_fields(traj, s.fields_mode, s.mask.boundary_cells);
        if (const auto ref = s.reference()) {
            double err = 0.0;
            const auto& f = fields[k - (s.fields_mode == TimeDerivativeMode::TemporalDifference ? 1 : 0)];
            const auto mask = interior_mask(f, s.mask);
            for (std::size_t i = 0; i < f.size(); ++i)
                if (mask[i]) err = std::max(err, std::abs(f.Z[i] / ref->saturation_value(f.t) - 1.0));
            lvl.saturation_error = err;
        }
        for (CheckId id : s.checks) lvl.min_margins.emplace_back(id, run_check(id, s, fields).min_margin);
        out.levels.push_back(std::move(lvl));
    }
    for (std::size_t l = 1; l < out.levels.size(); ++l) {
        const auto& a = out.levels[l - 1];
        const auto& b = out.levels[l];
        out.order_U.push_back(observed_order(a.residuals.resU, b.residuals.resU));
        out.order_Y.push_back(observed_order(a.residuals.resY, b.residuals.resY));
        out.order_Z.push_back(observed_order(a.residuals.resZ, b.residuals.resZ));
        out.order_saturation.push_back(observed_order(a.saturation_error, b.saturation_error));
    }
    if (!out_dir.empty()) {
        detail::ensure_dir(out_dir);
        std::vector<std::string> header{"level", "cells", "dt", "t", "resU", "resY", "resZ", "saturation_error"};
        for (CheckId id : base.checks) header.push_back("min_margin_" + to_string(id));
        CsvWriter csv(out_dir / "convergence.csv", header);
        json levels_json = json::array();
        for (std::size_t l = 0; l < out.levels.size(); ++l) {
            const auto& lvl = out.levels[l];
            csv.cell(static_cast<int>(l)).cell(static_cast<int>(lvl.cells)).cell(lvl.dt).cell(lvl.eval_time);
            csv.cell(lvl.residuals.resU).cell(lvl.residuals.resY).cell(lvl.residuals.resZ).cell(lvl.saturation_error);
            json margins;
            for (const auto& [id, v] : lvl.min_margins) {
                csv.cell(v);
                margins[to_string(id)] = detail::finite_or_null(v);
            }
            csv.end_row();
            levels_json.push_back({{"cells", lvl.cells},
                                   {"dt", lvl.dt},
                                   {"t", lvl.eval_time},
                                   {"resU", lvl.residuals.resU},
                                   {"resY", lvl.residuals.resY},
                                   {"resZ", lvl.residuals.resZ},
                                   {"saturation_error", detail::finite_or_null(lvl.saturation_error)},
                                   {"min_margins", margins}});
        }
        const auto orders = [](const std::vector<double>& v) {
            json a = json::array();
            for (double x : v) a.push_back(detail::finite_or_null(x));
            return a;
        };
        json summary;
        summary["scenario"] = scenario_json(base);
        summary["levels"] = levels_json;
        summary["orders"] = {{"resU", orders(out.order_U)},
                             {"resY", orders(out.order_Y)},
                             {"resZ", orders(out.order_Z)},
                             {"saturation_error", orders(out.order_saturation)}};
        detail::write_json(out_dir / "summary.json", summary);
    }
    return out;
}

} // namespace pmelab
