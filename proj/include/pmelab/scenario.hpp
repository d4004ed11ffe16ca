#pragma once

// Scenario files: JSON description of one verification run.

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmelab/bounds.hpp"
#include "pmelab/errors.hpp"
#include "pmelab/exact_solutions.hpp"
#include "pmelab/geometry.hpp"
#include "pmelab/hopf.hpp"
#include "pmelab/pme_solver.hpp"
#include "pmelab/verifier.hpp"

namespace pmelab {

using json = nlohmann::json;

enum class InitialKind { Constant, Bump, Barenblatt, FastDiffusion, Gaussian };
enum class DataSource { Exact, Solver };

inline std::string to_string(InitialKind k) {
    switch (k) {
    case InitialKind::Constant: return "constant";
    case InitialKind::Bump: return "bump";
    case InitialKind::Barenblatt: return "barenblatt";
    case InitialKind::FastDiffusion: return "fast_diffusion";
    case InitialKind::Gaussian: return "gaussian";
    }
    return "unknown";
}

struct InitialData {
    InitialKind kind = InitialKind::Constant;
    double value = 1.0;      // constant
    double amplitude = 1.0;  // bump: floor + amplitude * exp(-(r/width)^2)
    double width = 1.0;
    double floor = 0.2;
    double b0 = 1.0;  // self-similar profiles

    bool closed_form() const {
        return kind == InitialKind::Barenblatt || kind == InitialKind::FastDiffusion || kind == InitialKind::Gaussian;
    }
};

struct BoundsSection {
    std::optional<double> N, R;
    std::vector<double> t, y;
};

struct Scenario {
    std::string name = "scenario";
    ManifoldKind manifold = ManifoldKind::Euclidean;
    int n = 3;
    double kappa = 0.0;
    double m = 2.0;
    double r_max = 5.0;
    std::optional<double> support_fraction;
    std::size_t cells = 200;
    double t0 = 0.1, t1 = 1.0, dt = 1e-2;
    std::optional<double> time_origin;
    InitialData initial;
    DataSource source = DataSource::Solver;
    Scheme scheme = Scheme::ImplicitNewton;
    double newton_tol = 1e-10;
    int max_newton_iters = 50;
    BoundaryCondition boundary{};
    std::vector<CheckId> checks;
    TimeDerivativeMode fields_mode = TimeDerivativeMode::TemporalDifference;
    double tol_scale = 1e-3;
    MaskPolicy mask{};
    std::vector<double> y_samples;     ///< absolute values
    std::vector<double> y_samples_nr;  ///< multiples of N*R
    std::optional<double> thm_a2_c;
    BoundsSection bounds;

    ManifoldModel model() const {
        return manifold == ManifoldKind::Euclidean ? ManifoldModel::euclidean(n) : ManifoldModel::hyperbolic(n, kappa);
    }

    std::optional<ReferenceSolution> reference() const {
        switch (initial.kind) {
        case InitialKind::Barenblatt: return ReferenceSolution::barenblatt(n, m, initial.b0);
        case InitialKind::FastDiffusion: return ReferenceSolution::fast_diffusion(n, m, initial.b0);
        case InitialKind::Gaussian: return ReferenceSolution::gaussian(n);
        default: return std::nullopt;
        }
    }

    double resolved_r_max() const {
        if (support_fraction) return *support_fraction * SelfSimilarParams(n, m, initial.b0).support_radius(t0);
        return r_max;
    }

    RadialGrid grid() const { return RadialGrid(resolved_r_max(), cells); }

    std::size_t steps() const {
        return static_cast<std::size_t>(std::llround((t1 - t0) / dt));
    }

    /// Bounds are evaluated at t - origin. Closed-form data start at 0,
    /// imposed data at t0.
    double origin() const {
        if (time_origin) return *time_origin;
        return initial.closed_form() ? 0.0 : t0;
    }

    SolverConfig solver_config() const {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t0 = t0;
        cfg.t1 = t1;
        cfg.scheme = scheme;
        cfg.newton_tol = newton_tol;
        cfg.max_newton_iters = max_newton_iters;
        cfg.outer_bc = boundary;
        return cfg;
    }

    CheckOptions check_options() const {
        CheckOptions o;
        o.tol_scale = tol_scale;
        o.mask = mask;
        o.time_origin = origin();
        return o;
    }

    /// Throws ConfigError when the scenario cannot run or a requested
    /// check's preconditions are violated.
    void validate() const;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("scenario: " + msg);
}

inline void allowed_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    require(obj.is_object(), where + " must be an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& item : obj.items())
        require(ok.count(item.key()) > 0, "unknown key '" + item.key() + "' in " + where);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("scenario: bad value for '" + std::string(key) + "' in " + where);
    }
}

inline std::size_t get_count(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
    const auto v = get_or<long long>(obj, key, static_cast<long long>(fallback), where);
    require(v >= 0, std::string(key) + " in " + where + " must be nonnegative");
    return static_cast<std::size_t>(v);
}

inline double precondition_N(const Scenario& s) { return 2.0 / s.n + s.m - 1.0; }

} // namespace detail

inline void Scenario::validate() const {
    using detail::require;
    require(n >= 1, "manifold.n must be >= 1");
    require(manifold == ManifoldKind::Euclidean || kappa > 0.0, "hyperbolic kappa must be positive");
    require(m > 0.0 && std::isfinite(m), "m must be positive");
    require(cells >= 3, "grid.cells must be >= 3");
    require(t0 > 0.0 && t1 > t0 && dt > 0.0, "time requires 0 < t0 < t1 and dt > 0");
    require(steps() >= 2, "at least two time steps are required");
    require(tol_scale > 0.0, "tolerance.scale must be positive");
    require(mask.min_relative_u >= 0.0 && mask.min_relative_u < 1.0, "mask.min_relative_u must lie in [0, 1)");
    require(2 * mask.boundary_cells < cells, "mask.boundary_cells leaves no interior");
    require(newton_tol > 0.0 && max_newton_iters >= 1, "solver tolerances must be positive");
    if (boundary.kind == BoundaryCondition::Kind::DirichletPositive)
        require(boundary.value > 0.0, "Dirichlet boundary value must be positive");

    switch (initial.kind) {
    case InitialKind::Constant: require(initial.value > 0.0, "constant value must be positive"); break;
    case InitialKind::Bump:
        require(initial.floor > 0.0 && initial.amplitude >= 0.0 && initial.width > 0.0,
                "bump needs floor > 0, amplitude >= 0, width > 0");
        require(source == DataSource::Solver, "bump data has no closed-form evolution; use source 'solver'");
        break;
    case InitialKind::Barenblatt:
        require(m > 1.0, "barenblatt requires m > 1");
        require(source == DataSource::Exact, "barenblatt data vanish outside the support; use source 'exact'");
        break;
    case InitialKind::FastDiffusion:
        require(m < 1.0 && m > 1.0 - 2.0 / n, "fast_diffusion requires 1 - 2/n < m < 1");
        break;
    case InitialKind::Gaussian: require(m == 1.0, "gaussian requires m = 1"); break;
    }
    if (initial.closed_form()) {
        require(initial.b0 > 0.0, "initial.b0 must be positive");
        require(manifold == ManifoldKind::Euclidean, "closed-form profiles are Euclidean");
    }
    if (support_fraction) {
        require(initial.kind == InitialKind::Barenblatt, "grid.support_fraction applies to barenblatt data only");
        require(*support_fraction > 0.0 && *support_fraction < 1.0, "grid.support_fraction must lie in (0, 1)");
    } else {
        require(r_max > 0.0, "grid.r_max must be positive");
    }
    if (initial.kind == InitialKind::Barenblatt)
        require(resolved_r_max() < SelfSimilarParams(n, m, initial.b0).support_radius(t0),
                "barenblatt grid must lie inside the support at t0");

    const bool flat = manifold == ManifoldKind::Euclidean;
    for (CheckId id : checks) {
        const std::string c = to_string(id);
        switch (id) {
        case CheckId::ThmA1:
            require(m > 0.5 && m < 1.0 && m > 1.0 - 2.0 / n, c + " requires max(1/2, 1-2/n) < m < 1, got m = " +
                                                                  std::to_string(m));
            break;
        case CheckId::ThmA2:
            require(flat, c + " requires a Euclidean model");
            require(detail::precondition_N(*this) > 0.0, c + " requires m > 1 - 2/n");
            break;
        case CheckId::ThmB: require(m > 1.0, c + " requires m > 1"); break;
        case CheckId::FamilyBound:
            require(m > 1.0, c + " requires m > 1");
            require(!y_samples.empty() || !y_samples_nr.empty(), c + " requires y_samples or y_samples_nr");
            for (double s : y_samples_nr) require(s >= -0.25, c + " y_samples_nr entries must be >= -1/4");
            break;
        case CheckId::AB_Classical:
            require(flat, c + " requires a Euclidean model");
            require(detail::precondition_N(*this) > 0.0, c + " requires m > 1 - 2/n");
            break;
        case CheckId::LiYau_K0:
            require(flat, c + " requires a Euclidean model");
            require(m == 1.0, c + " requires m = 1");
            break;
        case CheckId::CD_Condition: break;
        }
    }
    if (bounds.N) require(*bounds.N > 0.0, "bounds.N must be positive");
    if (bounds.R) require(*bounds.R >= 0.0, "bounds.R must be nonnegative");
    for (double t : bounds.t) require(t > 0.0, "bounds.t entries must be positive");
}

inline Scenario parse_scenario(const json& j) {
    using detail::get_or;
    using detail::require;
    detail::allowed_keys(j, "scenario",
                         {"name", "manifold", "m", "grid", "time", "initial", "source", "solver", "boundary", "checks",
                          "fields_mode", "tolerance", "mask", "y_samples", "y_samples_nr", "thm_a2", "bounds"});
    Scenario s;
    s.name = get_or<std::string>(j, "name", s.name, "scenario");
    require(j.contains("m"), "missing 'm'");
    s.m = get_or<double>(j, "m", s.m, "scenario");

    if (j.contains("manifold")) {
        const auto& mj = j.at("manifold");
        detail::allowed_keys(mj, "manifold", {"kind", "n", "kappa"});
        const auto kind = get_or<std::string>(mj, "kind", "euclidean", "manifold");
        if (kind == "euclidean") s.manifold = ManifoldKind::Euclidean;
        else if (kind == "hyperbolic") s.manifold = ManifoldKind::Hyperbolic;
        else throw ConfigError("scenario: manifold.kind must be 'euclidean' or 'hyperbolic'");
        s.n = get_or<int>(mj, "n", s.n, "manifold");
        s.kappa = get_or<double>(mj, "kappa", s.manifold == ManifoldKind::Hyperbolic ? 1.0 : 0.0, "manifold");
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        detail::allowed_keys(g, "grid", {"r_max", "cells", "support_fraction"});
        s.r_max = get_or<double>(g, "r_max", s.r_max, "grid");
        s.cells = detail::get_count(g, "cells", s.cells, "grid");
        if (g.contains("support_fraction")) s.support_fraction = get_or<double>(g, "support_fraction", 0.0, "grid");
        require(!(g.contains("r_max") && g.contains("support_fraction")),
                "grid takes either r_max or support_fraction");
    }
    if (j.contains("time")) {
        const auto& t = j.at("time");
        detail::allowed_keys(t, "time", {"t0", "t1", "dt", "origin"});
        s.t0 = get_or<double>(t, "t0", s.t0, "time");
        s.t1 = get_or<double>(t, "t1", s.t1, "time");
        s.dt = get_or<double>(t, "dt", s.dt, "time");
        if (t.contains("origin")) s.time_origin = get_or<double>(t, "origin", 0.0, "time");
    }
    if (j.contains("initial")) {
        const auto& in = j.at("initial");
        detail::allowed_keys(in, "initial", {"kind", "value", "amplitude", "width", "floor", "b0"});
        const auto kind = get_or<std::string>(in, "kind", "constant", "initial");
        if (kind == "constant") s.initial.kind = InitialKind::Constant;
        else if (kind == "bump") s.initial.kind = InitialKind::Bump;
        else if (kind == "barenblatt") s.initial.kind = InitialKind::Barenblatt;
        else if (kind == "fast_diffusion") s.initial.kind = InitialKind::FastDiffusion;
        else if (kind == "gaussian") s.initial.kind = InitialKind::Gaussian;
        else throw ConfigError("scenario: unknown initial.kind '" + kind + "'");
        s.initial.value = get_or<double>(in, "value", s.initial.value, "initial");
        s.initial.amplitude = get_or<double>(in, "amplitude", s.initial.amplitude, "initial");
        s.initial.width = get_or<double>(in, "width", s.initial.width, "initial");
        s.initial.floor = get_or<double>(in, "floor", s.initial.floor, "initial");
        s.initial.b0 = get_or<double>(in, "b0", s.initial.b0, "initial");
    }
    s.source = s.initial.closed_form() || s.initial.kind == InitialKind::Constant ? DataSource::Exact : DataSource::Solver;
    if (j.contains("source")) {
        const auto src = get_or<std::string>(j, "source", "", "scenario");
        if (src == "exact") s.source = DataSource::Exact;
        else if (src == "solver") s.source = DataSource::Solver;
        else throw ConfigError("scenario: source must be 'exact' or 'solver'");
    }
    if (j.contains("solver")) {
        const auto& sv = j.at("solver");
        detail::allowed_keys(sv, "solver", {"scheme", "newton_tol", "max_newton_iters"});
        const auto scheme = get_or<std::string>(sv, "scheme", "newton", "solver");
        if (scheme == "newton") s.scheme = Scheme::ImplicitNewton;
        else if (scheme == "picard") s.scheme = Scheme::SemiImplicit;
        else throw ConfigError("scenario: solver.scheme must be 'newton' or 'picard'");
        s.newton_tol = get_or<double>(sv, "newton_tol", s.newton_tol, "solver");
        s.max_newton_iters = get_or<int>(sv, "max_newton_iters", s.max_newton_iters, "solver");
    }
    if (j.contains("boundary")) {
        const auto& b = j.at("boundary");
        detail::allowed_keys(b, "boundary", {"kind", "value"});
        const auto kind = get_or<std::string>(b, "kind", "neumann", "boundary");
        if (kind == "neumann") s.boundary = BoundaryCondition::neumann();
        else if (kind == "dirichlet") s.boundary = BoundaryCondition::dirichlet(get_or<double>(b, "value", 0.0, "boundary"));
        else throw ConfigError("scenario: boundary.kind must be 'neumann' or 'dirichlet'");
    }
    if (j.contains("checks")) {
        require(j.at("checks").is_array(), "checks must be an array");
        for (const auto& c : j.at("checks")) {
            require(c.is_string(), "check ids are strings");
            const auto id = check_from_string(c.get<std::string>());
            require(id.has_value(), "unknown check '" + c.get<std::string>() + "'");
            s.checks.push_back(*id);
        }
    }
    if (j.contains("fields_mode")) {
        const auto mode = get_or<std::string>(j, "fields_mode", "", "scenario");
        if (mode == "temporal_difference") s.fields_mode = TimeDerivativeMode::TemporalDifference;
        else if (mode == "pde_identity") s.fields_mode = TimeDerivativeMode::PdeIdentity;
        else throw ConfigError("scenario: fields_mode must be 'temporal_difference' or 'pde_identity'");
    }
    if (j.contains("tolerance")) {
        detail::allowed_keys(j.at("tolerance"), "tolerance", {"scale"});
        s.tol_scale = get_or<double>(j.at("tolerance"), "scale", s.tol_scale, "tolerance");
    }
    if (j.contains("mask")) {
        detail::allowed_keys(j.at("mask"), "mask", {"boundary_cells", "min_relative_u"});
        s.mask.boundary_cells = detail::get_count(j.at("mask"), "boundary_cells", s.mask.boundary_cells, "mask");
        s.mask.min_relative_u = get_or<double>(j.at("mask"), "min_relative_u", s.mask.min_relative_u, "mask");
    }
    s.y_samples = get_or<std::vector<double>>(j, "y_samples", {}, "scenario");
    s.y_samples_nr = get_or<std::vector<double>>(j, "y_samples_nr", {}, "scenario");
    if (j.contains("thm_a2")) {
        detail::allowed_keys(j.at("thm_a2"), "thm_a2", {"c"});
        if (j.at("thm_a2").contains("c")) s.thm_a2_c = get_or<double>(j.at("thm_a2"), "c", 0.0, "thm_a2");
    }
    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        detail::allowed_keys(b, "bounds", {"N", "R", "t", "y"});
        if (b.contains("N")) s.bounds.N = get_or<double>(b, "N", 0.0, "bounds");
        if (b.contains("R")) s.bounds.R = get_or<double>(b, "R", 0.0, "bounds");
        s.bounds.t = get_or<std::vector<double>>(b, "t", {}, "bounds");
        s.bounds.y = get_or<std::vector<double>>(b, "y", {}, "bounds");
    }
    s.validate();
    return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

inline std::vector<std::string> builtin_names() {
    return {"barenblatt-saturation", "constant-trivial",  "fast-diffusion-saturation",
            "gaussian-li-yau",       "hyperbolic-thm-a1", "hyperbolic-thm-b"};
}

inline std::string builtin_text(const std::string& name) {
    if (name == "barenblatt-saturation")
        return R"({
  "name": "barenblatt-saturation",
  "manifold": {"kind": "euclidean", "n": 2},
  "m": 2.0,
  "grid": {"support_fraction": 0.99, "cells": 2048},
  "time": {"t0": 1.0, "t1": 1.01, "dt": 0.001},
  "initial": {"kind": "barenblatt", "b0": 1.0},
  "checks": ["ab_classical", "thm_b", "thm_a2"],
  "mask": {"boundary_cells": 2, "min_relative_u": 0.1}
})";
    if (name == "constant-trivial")
        return R"({
  "name": "constant-trivial",
  "manifold": {"kind": "hyperbolic", "n": 3, "kappa": 1.0},
  "m": 2.0,
  "grid": {"r_max": 3.0, "cells": 60},
  "time": {"t0": 0.5, "t1": 1.0, "dt": 0.1, "origin": 0.0},
  "initial": {"kind": "constant", "value": 1.0},
  "checks": ["thm_b", "family_bound", "cd_condition"],
  "y_samples_nr": [-0.25, 0.0, 1.0, 4.0]
})";
    if (name == "fast-diffusion-saturation")
        return R"({
  "name": "fast-diffusion-saturation",
  "manifold": {"kind": "euclidean", "n": 3},
  "m": 0.8,
  "grid": {"r_max": 6.0, "cells": 2048},
  "time": {"t0": 1.0, "t1": 1.01, "dt": 0.001},
  "initial": {"kind": "fast_diffusion", "b0": 1.0},
  "checks": ["thm_a1", "ab_classical", "thm_a2"],
  "mask": {"boundary_cells": 2, "min_relative_u": 0.1}
})";
    if (name == "gaussian-li-yau")
        return R"({
  "name": "gaussian-li-yau",
  "manifold": {"kind": "euclidean", "n": 3},
  "m": 1.0,
  "grid": {"r_max": 6.0, "cells": 2048},
  "time": {"t0": 0.5, "t1": 2.0, "dt": 0.005},
  "initial": {"kind": "gaussian"},
  "checks": ["li_yau", "thm_a2", "ab_classical"]
})";
    if (name == "hyperbolic-thm-a1")
        return R"({
  "name": "hyperbolic-thm-a1",
  "manifold": {"kind": "hyperbolic", "n": 3, "kappa": 1.0},
  "m": 0.75,
  "grid": {"r_max": 6.0, "cells": 300},
  "time": {"t0": 0.1, "t1": 1.0, "dt": 0.005},
  "initial": {"kind": "bump", "amplitude": 1.0, "width": 1.0, "floor": 0.2},
  "boundary": {"kind": "dirichlet", "value": 0.2},
  "checks": ["thm_a1", "cd_condition"]
})";
    if (name == "hyperbolic-thm-b")
        return R"({
  "name": "hyperbolic-thm-b",
  "manifold": {"kind": "hyperbolic", "n": 3, "kappa": 1.0},
  "m": 2.0,
  "grid": {"r_max": 6.0, "cells": 300},
  "time": {"t0": 0.1, "t1": 1.0, "dt": 0.005},
  "initial": {"kind": "bump", "amplitude": 1.0, "width": 1.0, "floor": 0.2},
  "boundary": {"kind": "dirichlet", "value": 0.2},
  "checks": ["thm_b", "family_bound", "cd_condition"],
  "y_samples_nr": [-0.25, 0.0, 1.0, 4.0]
})";
    throw ConfigError("scenario: unknown builtin '" + name + "'");
}

inline Scenario builtin_scenario(const std::string& name) { return parse_scenario_text(builtin_text(name)); }

} // namespace pmelab
