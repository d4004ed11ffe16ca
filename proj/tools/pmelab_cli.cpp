// Scenario-driven front end: solve, verify, exact, bounds, convergence.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pmelab/runner.hpp"
#include "pmelab/scenario.hpp"

using namespace pmelab;

namespace {

struct Options {
    std::string scenario;
    std::string builtin;
    std::string out;
    int levels = 3;
    std::optional<double> tol_scale;
};

Scenario load(const Options& o) {
    if (o.scenario.empty() == o.builtin.empty())
        throw ConfigError("exactly one of --scenario or --builtin is required");
    Scenario s = o.builtin.empty() ? load_scenario(o.scenario) : builtin_scenario(o.builtin);
    if (o.tol_scale) {
        s.tol_scale = *o.tol_scale;
        s.validate();
    }
    return s;
}

void print_report(const VerificationReport& rep) {
    std::cout << to_string(rep.check_id) << ": " << (rep.pass ? "pass" : "FAIL") << "  points=" << rep.points.size()
              << "  min_margin=" << format_number(rep.min_margin)
              << "  min_scaled_margin=" << format_number(rep.min_scaled_margin) << '\n';
    for (const auto& r : rep.regimes)
        std::cout << "    regime " << r.regime << ": points=" << r.points << "  min_margin=" << format_number(r.min_margin)
                  << '\n';
    for (const auto& note : rep.notes) std::cout << "    note: " << note << '\n';
}

int cmd_verify(const Options& o) {
    const auto s = load(o);
    const auto result = run_scenario(s, o.out);
    std::cout << "scenario " << s.name << '\n';
    for (const auto& rep : result.reports) print_report(rep);
    return result.exit_code;
}

int cmd_solve(const Options& o) {
    const auto summary = run_solve(load(o), o.out);
    std::cout << summary.dump(2) << '\n';
    return kExitPass;
}

int cmd_exact(const Options& o) {
    const auto summary = run_exact(load(o), o.out);
    std::cout << summary.dump(2) << '\n';
    return kExitPass;
}

int cmd_bounds(const Options& o) {
    const auto summary = run_bounds(load(o), o.out);
    std::cout << summary.dump(2) << '\n';
    return kExitPass;
}

int cmd_convergence(const Options& o) {
    const auto s = load(o);
    const auto res = run_convergence(s, o.levels, o.out);
    std::cout << "level  cells  dt  resU  resY  resZ  saturation_error\n";
    for (std::size_t l = 0; l < res.levels.size(); ++l) {
        const auto& lv = res.levels[l];
        std::cout << l << "  " << lv.cells << "  " << format_number(lv.dt) << "  " << format_number(lv.residuals.resU)
                  << "  " << format_number(lv.residuals.resY) << "  " << format_number(lv.residuals.resZ) << "  "
                  << format_number(lv.saturation_error) << '\n';
    }
    std::cout << "observed orders (resU, resY, resZ, saturation):\n";
    for (std::size_t l = 0; l < res.order_U.size(); ++l)
        std::cout << "  " << l << "->" << l + 1 << ": " << format_number(res.order_U[l]) << "  "
                  << format_number(res.order_Y[l]) << "  " << format_number(res.order_Z[l]) << "  "
                  << format_number(res.order_saturation[l]) << '\n';
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-estimate verification for the porous medium equation on model manifolds"};
    app.require_subcommand(1);
    Options opts;
    double tol = std::nan("");

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opts.scenario, "Scenario JSON file");
        sub->add_option("--builtin", opts.builtin, "Builtin scenario name");
        sub->add_option("--out", opts.out, "Output directory");
        sub->add_option("--tol-scale", tol, "Override the relative tolerance");
    };
    auto* solve = app.add_subcommand("solve", "Compute the trajectory only");
    auto* verify = app.add_subcommand("verify", "Run the scenario's checks");
    auto* exact = app.add_subcommand("exact", "Closed-form fields and saturation errors");
    auto* bounds = app.add_subcommand("bounds", "Tabulate the bound functions");
    auto* convergence = app.add_subcommand("convergence", "Refinement study");
    for (auto* sub : {solve, verify, exact, bounds, convergence}) add_common(sub);
    convergence->add_option("--levels", opts.levels, "Number of refinement levels")->check(CLI::PositiveNumber);
    auto* list = app.add_subcommand("list", "List builtin scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    if (!std::isnan(tol)) opts.tol_scale = tol;

    if (*list) {
        for (const auto& name : builtin_names()) std::cout << name << '\n';
        return kExitPass;
    }
    try {
        if (*solve) return cmd_solve(opts);
        if (*verify) return cmd_verify(opts);
        if (*exact) return cmd_exact(opts);
        if (*bounds) return cmd_bounds(opts);
        return cmd_convergence(opts);
    } catch (const std::exception& e) {
        const int rc = exit_code_for(e);
        std::cerr << (rc == kExitConfig ? "configuration error: " : "solver error: ") << e.what() << '\n';
        if (const auto* se = dynamic_cast<const SolverError*>(&e))
            std::cerr << "  at t = " << format_number(se->time()) << '\n';
        return rc;
    }
}
