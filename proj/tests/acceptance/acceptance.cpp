// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pmelab/bounds.hpp"
#include "pmelab/exact_solutions.hpp"
#include "pmelab/geometry.hpp"
#include "pmelab/hopf.hpp"
#include "pmelab/pme_solver.hpp"
#include "pmelab/verifier.hpp"

using namespace pmelab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<HopfFields> exact_fields(const ReferenceSolution& ref, double r_max, std::size_t cells, double t0,
                                     double dt, std::size_t steps) {
    const RadialGrid grid(r_max, cells);
    return compute_all_fields(sample_trajectory(ref, grid, uniform_times(t0, dt, steps)));
}

SolutionTrajectory bump_run(const ManifoldModel& model, double m, std::size_t cells, double dt,
                            double floor = 0.2, std::optional<double> dirichlet = 0.2) {
    const RadialGrid grid(6.0, cells);
    const Field u0 = sample(grid, [&](double r) { return floor + std::exp(-r * r); });
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t0 = 0.1;
    cfg.t1 = 1.0;
    if (dirichlet) cfg.outer_bc = BoundaryCondition::dirichlet(*dirichlet);
    return solve(u0, cfg, m, model, grid);
}

std::size_t interior_count(std::span<const HopfFields> fields, const CheckOptions& opts) {
    std::size_t count = 0;
    for (const auto& f : fields) {
        if (!(f.t - opts.time_origin > 0.0)) continue;
        const auto mask = interior_mask(f, opts.mask);
        count += static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
    }
    return count;
}

struct SaturationCase {
    const char* label;
    ReferenceSolution ref;
    double r_max;
};

std::vector<SaturationCase> saturation_cases() {
    std::vector<SaturationCase> out;
    for (int n : {1, 2, 3}) {
        const auto ref = ReferenceSolution::barenblatt(n, 2.0);
        out.push_back({n == 1 ? "barenblatt n=1" : n == 2 ? "barenblatt n=2" : "barenblatt n=3", ref,
                       0.99 * ref.params().support_radius(1.0)});
    }
    out.push_back({"fast diffusion n=3", ReferenceSolution::fast_diffusion(3, 0.8), 6.0});
    return out;
}

const CheckOptions kSaturationOpts{1e-3, {2, 0.1}, 0.0};

// |2tZ/N - 1| and margin*2t/N over the points of an AB-type report.
void saturation_stats(const VerificationReport& rep, double& worst_error, double& min_scaled) {
    for (const auto& p : rep.points) {
        const double s = 2.0 * p.t / rep.params.N;
        worst_error = std::max(worst_error, std::abs(p.Z * s - 1.0));
        min_scaled = std::min(min_scaled, p.margin * s);
    }
}

Outcome criterion1() {
    Outcome out;
    double worst = 0.0, min_scaled = kInf, slowest = 0.0;
    for (const auto& c : saturation_cases()) {
        const auto start = std::chrono::steady_clock::now();
        const auto fields = exact_fields(c.ref, c.r_max, 2048, 1.0, 1e-3, 4);
        const auto rep = check_aronson_benilan(fields, ManifoldModel::euclidean(c.ref.n()), c.ref.m(), kSaturationOpts);
        const double elapsed = seconds_since(start);
        double w = 0.0, s = kInf;
        saturation_stats(rep, w, s);
        out.require(!rep.points.empty(), std::string(c.label) + " has interior points");
        out.require(w <= 1e-2, std::string(c.label) + " saturation error <= 1e-2");
        out.require(s >= -1e-3, std::string(c.label) + " margin >= -1e-3 N/2t");
        out.require(elapsed < 10.0, std::string(c.label) + " runtime < 10 s");
        worst = std::max(worst, w);
        min_scaled = std::min(min_scaled, s);
        slowest = std::max(slowest, elapsed);
    }
    out.detail << "max |2tZ/N-1| = " << worst << ", min margin*2t/N = " << min_scaled << ", slowest case "
               << slowest << " s";
    return out;
}

Outcome criterion2() {
    Outcome out;
    double worst_grid = 0.0, worst_analytic = 0.0;
    for (int n : {1, 2, 3}) {
        const auto ref = ReferenceSolution::gaussian(n);
        const RadialGrid grid(6.0, 2048);
        for (double t : {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0}) {
            const double dt = 1e-4;
            const auto traj = sample_trajectory(ref, grid, uniform_times(t - dt, dt, 2));
            const auto num = compute_fields(traj, 1);
            const auto ana = compute_fields_analytic(ref, grid, t);
            for (std::size_t i = num.first; i < num.last; ++i) {
                worst_grid = std::max(worst_grid, std::abs((num.X[i] - num.Y[i]) * 2.0 * t / n - 1.0));
                worst_analytic = std::max(worst_analytic, std::abs((ana.X[i] - ana.Y[i]) * 2.0 * t / n - 1.0));
            }
        }
    }
    out.require(worst_grid <= 1e-3, "grid derivatives within 1e-3");
    out.require(worst_analytic <= 1e-6, "analytic derivatives within 1e-6");
    out.detail << "max |(X-Y)2t/n-1|: grid " << worst_grid << ", analytic " << worst_analytic;
    return out;
}

Outcome criterion3() {
    Outcome out;
    for (double kappa : {0.25, 1.0}) {
        const auto hyp = ManifoldModel::hyperbolic(3, kappa);
        double scaled[2];
        std::size_t cells = 300;
        double dt = 5e-3;
        for (int level = 0; level < 2; ++level) {
            const auto traj = bump_run(hyp, 0.75, cells, dt);
            CheckOptions opts;
            opts.time_origin = traj.times.front();
            const auto fields = compute_all_fields(traj);
            const auto rep = check_thm_a1(fields, hyp, 0.75, opts);
            out.require(rep.points.size() == interior_count(fields, opts), "every interior point checked");
            scaled[level] = rep.min_scaled_margin;
            cells *= 2;
            dt /= 2.0;
        }
        const std::string tag = "kappa=" + std::to_string(kappa);
        out.require(scaled[0] >= -1e-3 && scaled[1] >= -1e-3, tag + " min scaled margin >= -1e-3");
        out.require(scaled[1] >= scaled[0] - std::abs(scaled[0]), tag + " no factor-2 degradation under refinement");
        out.detail << "kappa=" << kappa << ": min scaled margin " << scaled[0] << " -> " << scaled[1] << "; ";
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    double worst = 0.0;
    const auto chain = [&](const std::vector<HopfFields>& fields, int n, double m, const std::string& label) {
        const auto rep = check_thm_a2(fields, ManifoldModel::euclidean(n), m, kSaturationOpts);
        out.require(!rep.points.empty(), label + " has points");
        for (const auto& p : rep.points) worst = std::max(worst, std::abs(p.margin) * 2.0 * p.t / rep.params.N);
    };
    for (int n : {1, 2, 3}) {
        chain(exact_fields(ReferenceSolution::gaussian(n), 4.0, 1024, 0.5, 1e-2, 20), n, 1.0,
              "gaussian n=" + std::to_string(n));
        const auto bb = ReferenceSolution::barenblatt(n, 2.0);
        chain(exact_fields(bb, 0.99 * bb.params().support_radius(1.0), 2048, 1.0, 1e-2, 10), n, 2.0,
              "barenblatt n=" + std::to_string(n));
    }
    out.require(worst <= 1e-2, "saturated margins within 1e-2 N/2t");

    const auto flat = ManifoldModel::euclidean(3);
    const auto traj = bump_run(flat, 2.0, 200, 1e-2, 0.2, std::nullopt);
    const auto bump = check_thm_a2(compute_all_fields(traj), flat, 2.0);
    out.require(!bump.points.empty() && bump.min_margin > 0.0, "bump margins strictly positive");
    out.detail << "max |margin|*2t/N on exact chains " << worst << ", bump min margin " << bump.min_margin;
    return out;
}

Outcome criterion5() {
    Outcome out;
    const auto hyp = ManifoldModel::hyperbolic(3, 1.0);
    const auto traj = bump_run(hyp, 2.0, 200, 1e-2);
    const auto fields = compute_all_fields(traj);
    CheckOptions opts;
    opts.time_origin = traj.times.front();
    const auto rep = check_thm_b(fields, hyp, 2.0, opts);
    const std::size_t interior = interior_count(fields, opts);
    std::size_t counted = 0;
    for (const auto& r : rep.regimes) counted += r.points;
    const double threshold = -0.25 * rep.params.N * rep.params.R;
    bool consistent = rep.points.size() == interior;
    for (const auto& p : rep.points) consistent = consistent && p.regime == (p.Y > threshold ? 1 : 2);
    out.require(counted == interior && consistent, "regimes partition the interior");
    out.require(rep.min_scaled_margin >= -1e-3, "min scaled margin >= -1e-3");
    out.detail << "R = " << rep.params.R << ", interior points " << interior << ", regimes";
    for (const auto& r : rep.regimes) out.detail << " [" << r.regime << ": " << r.points << "]";
    out.detail << ", min scaled margin " << rep.min_scaled_margin;

    double max_diff = 0.0, worst = 0.0, min_scaled = kInf;
    for (const auto& c : saturation_cases()) {
        if (c.ref.m() < 1.0) continue;
        const auto flat = ManifoldModel::euclidean(c.ref.n());
        const auto f = exact_fields(c.ref, c.r_max, 2048, 1.0, 1e-3, 4);
        const auto b = check_thm_b(f, flat, c.ref.m(), kSaturationOpts);
        const auto ab = check_aronson_benilan(f, flat, c.ref.m(), kSaturationOpts);
        out.require(b.params.R == 0.0 && b.points.size() == ab.points.size() && b.pass == ab.pass,
                    std::string(c.label) + " flat reduction");
        for (std::size_t i = 0; i < std::min(b.points.size(), ab.points.size()); ++i)
            max_diff = std::max(max_diff, std::abs(b.points[i].margin - ab.points[i].margin) * 2.0 * b.points[i].t /
                                              b.params.N);
        saturation_stats(b, worst, min_scaled);
    }
    out.require(max_diff <= 1e-12, "kappa=0 margins equal the classical ones");
    out.require(worst <= 1e-2 && min_scaled >= -1e-3, "kappa=0 reproduces the saturation criterion");
    out.detail << "; kappa=0: max margin difference " << max_diff << ", max |2tZ/N-1| " << worst;
    return out;
}

Outcome criterion6() {
    Outcome out;
    std::vector<double> t_grid(60);
    for (std::size_t j = 0; j < t_grid.size(); ++j)
        t_grid[j] = 0.1 * std::pow(100.0, static_cast<double>(j) / static_cast<double>(t_grid.size() - 1));
    double worst_riccati = 0.0;
    for (auto [N, R, y] : {std::tuple{2.0, 1.0, 0.0}, std::tuple{3.0, 0.5, 1.0}, std::tuple{2.0, 1.0, -0.5 + 1e-6}})
        worst_riccati = std::max(worst_riccati, riccati_residual(t_grid, y, N, R));
    out.require(worst_riccati <= 1e-8, "riccati residual <= 1e-8");

    double worst_fd = 0.0;
    const double N = 3.0, R = 0.7, y_star = -0.25 * N * R;
    for (int a = 0; a < 10; ++a) {
        const double t = 0.1 * std::pow(100.0, a / 9.0);
        for (int b = 0; b < 10; ++b) {
            const double s = 1e-2 * std::pow(1e4, b / 9.0);
            const double y = y_star + s, h = 1e-4 * s;
            const double fd = (capC(t, y + h, N, R) - capC(t, y - h, N, R)) / (2.0 * h);
            const double exact = dC_dy(t, y, N, R);
            worst_fd = std::max(worst_fd, std::abs(fd - exact) / std::abs(exact));
        }
    }
    out.require(worst_fd <= 1e-6, "dC/dy matches central differences");

    double worst_limit = 0.0;
    for (auto [Nl, Rl] : {std::pair{2.0, 1.0}, std::pair{3.0, 0.5}, std::pair{4.0, 2.0}}) {
        const double ys = -0.25 * Nl * Rl;
        for (double t : t_grid) {
            const double c_target = 0.5 * Nl * Rl + 0.5 * Nl / t;
            const double d_target = 2.0 * Rl * t / 3.0;
            worst_limit = std::max(worst_limit, std::abs(capC(t, ys, Nl, Rl) - c_target) / std::max(1.0, c_target));
            worst_limit = std::max(worst_limit, std::abs(dC_dy(t, ys, Nl, Rl) - d_target) / std::max(1.0, d_target));
        }
    }
    out.require(worst_limit <= 1e-8, "threshold limits");
    out.detail << "riccati " << worst_riccati << ", dC/dy relative " << worst_fd << ", limits " << worst_limit;
    return out;
}

Outcome criterion7() {
    Outcome out;
    struct Case {
        std::string label;
        ReferenceSolution ref;
        double r_max;
        double min_rel_u;
    };
    const auto bb2 = ReferenceSolution::barenblatt(2, 2.0);
    const auto bb3 = ReferenceSolution::barenblatt(3, 3.0);
    const std::vector<Case> cases = {{"gaussian n=3", ReferenceSolution::gaussian(3), 4.0, 0.0},
                                     {"barenblatt n=2 m=2", bb2, 0.7 * bb2.params().support_radius(1.0), 0.1},
                                     {"barenblatt n=3 m=3", bb3, 0.7 * bb3.params().support_radius(1.0), 0.1}};
    double min_order = kInf;
    for (const auto& c : cases) {
        for (auto mode : {TimeDerivativeMode::TemporalDifference, TimeDerivativeMode::PdeIdentity}) {
            EvolutionResiduals prev;
            for (int level = 0; level < 3; ++level) {
                const RadialGrid grid(c.r_max, 64u << level);
                const double dt = 0.02 / (1 << level);
                const auto traj = sample_trajectory(c.ref, grid, uniform_times(1.0 - 2.0 * dt, dt, 4));
                const auto res = evolution_residuals(traj, 2, traj.model, mode, {2, c.min_rel_u});
                if (c.ref.m() == 1.0) out.require(res.resU == 0.0, c.label + " resU vanishes for m=1");
                if (level > 0) {
                    std::vector<double> orders = {std::log2(prev.resY / res.resY), std::log2(prev.resZ / res.resZ)};
                    if (c.ref.m() != 1.0) orders.push_back(std::log2(prev.resU / res.resU));
                    for (double o : orders) {
                        min_order = std::min(min_order, o);
                        out.require(o >= 1.8, c.label + " residual order >= 1.8");
                    }
                }
                prev = res;
            }
        }
    }

    // ε(h): relative defect of cosh(√κ r), which is zero in the continuum.
    const double kappa = 0.7;
    const auto hyp = ManifoldModel::hyperbolic(3, kappa);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-2.0, 2.0), width(0.3, 2.0);
    double prev_eps = 0.0, min_cd_order = kInf, worst_ratio = 0.0;
    for (std::size_t cells : {64u, 128u, 256u}) {
        const RadialGrid grid(3.0, cells);
        const Field g = sample(grid, [&](double r) { return std::cosh(std::sqrt(kappa) * r); });
        const Field defect = cd_defect(hyp, grid, g);
        const Field g2 = gamma2_radial(hyp, grid, g);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
            num = std::max(num, std::abs(defect[i]));
            den = std::max(den, std::abs(g2[i]));
        }
        const double eps = num / den;
        if (prev_eps > 0.0) {
            const double o = std::log2(prev_eps / eps);
            min_cd_order = std::min(min_cd_order, o);
            out.require(o >= 1.8, "CD defect order >= 1.8");
        }
        prev_eps = eps;

        for (int trial = 0; trial < 10; ++trial) {
            const double a = coef(rng), b = coef(rng), c = coef(rng), s = width(rng);
            const Field f = sample(grid, [&](double r) { return a * std::exp(-r * r / (s * s)) + b * r * r + c * std::cos(r); });
            for (const auto& model : {ManifoldModel::euclidean(2), hyp, ManifoldModel::hyperbolic(3, 1.0)}) {
                const Field d = cd_defect(model, grid, f);
                const Field gf = gamma2_radial(model, grid, f);
                double scale = 0.0, worst = 0.0;
                for (std::size_t i = 2; i + 2 < d.size(); ++i) {
                    scale = std::max(scale, std::abs(gf[i]));
                    worst = std::max(worst, -d[i]);
                }
                worst_ratio = std::max(worst_ratio, worst / (eps * scale));
                out.require(worst <= eps * scale, "CD defect >= -eps(h)");
            }
        }
    }
    out.detail << "min residual order " << min_order << ", eps(h) order " << min_cd_order
               << ", worst negative defect / eps(h) " << worst_ratio;
    return out;
}

using Dense = std::vector<std::vector<double>>;

std::vector<double> dense_solve(Dense a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// Implicit heat step assembled densely from the conservative stencil.
Field dense_heat_step(const ManifoldModel& model, const RadialGrid& grid, const Field& u, double dt,
                      const BoundaryCondition& bc) {
    const std::size_t n = grid.size();
    const double h = grid.h();
    Dense a(n, std::vector<double>(n, 0.0));
    std::vector<double> b = u;
    const auto face = [&](double r) { return std::pow(model.warp(r), model.dim() - 1.0); };
    for (std::size_t i = 0; i < n; ++i) {
        const double s = dt / (face(grid.r(i)) * h);
        a[i][i] = 1.0;
        if (i > 0) {
            const double w = face(static_cast<double>(i) * h) / h;
            a[i][i] += s * w;
            a[i][i - 1] -= s * w;
        }
        if (i + 1 < n) {
            const double w = face(static_cast<double>(i + 1) * h) / h;
            a[i][i] += s * w;
            a[i][i + 1] -= s * w;
        } else if (bc.kind == BoundaryCondition::Kind::DirichletPositive) {
            const double w = face(grid.r_max()) / (0.5 * h);
            a[i][i] += s * w;
            b[i] += s * w * bc.value;
        }
    }
    return dense_solve(a, b);
}

Outcome criterion8() {
    Outcome out;
    const std::vector<ManifoldModel> models = {ManifoldModel::euclidean(1), ManifoldModel::euclidean(3),
                                               ManifoldModel::hyperbolic(3, 1.0)};
    double worst_mass = 0.0;
    for (const auto& model : models) {
        for (double m : {0.75, 1.0, 2.0, 3.0}) {
            const RadialGrid grid(4.0, 80);
            SolverConfig cfg;
            cfg.dt = 0.01;
            cfg.t0 = 0.1;
            cfg.t1 = 0.3;
            const auto traj = solve(sample(grid, [](double r) { return 0.1 + 3.0 * std::exp(-r * r); }), cfg, m, model, grid);
            const double mass0 = discrete_mass(model, grid, traj.snapshots.front());
            for (std::size_t k = 1; k < traj.size(); ++k) {
                const double change = std::abs(discrete_mass(model, grid, traj.snapshots[k]) -
                                               discrete_mass(model, grid, traj.snapshots[k - 1]));
                worst_mass = std::max(worst_mass, change / mass0);
            }
        }
    }
    out.require(worst_mass <= 1e-10, "mass change <= 1e-10 per step");

    double worst_dense = 0.0;
    for (const auto& model : models) {
        for (const auto& bc : {BoundaryCondition::neumann(), BoundaryCondition::dirichlet(0.2)}) {
            const RadialGrid grid(4.0, 60);
            const Field u = sample(grid, [](double r) { return 0.2 + 2.0 * std::exp(-r * r); });
            const Field dense = dense_heat_step(model, grid, u, 0.05, bc);
            for (auto scheme : {Scheme::ImplicitNewton, Scheme::SemiImplicit}) {
                const Field ours = step(u, 0.05, 1.0, model, grid, bc, scheme);
                for (std::size_t i = 0; i < u.size(); ++i) worst_dense = std::max(worst_dense, std::abs(ours[i] - dense[i]));
            }
        }
    }
    out.require(worst_dense <= 1e-12, "m=1 step matches dense oracle");

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> exponents = {0.75, 1.0, 2.0, 3.0};
    std::size_t violations = 0;
    double worst_gap = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
        const auto& model = models[static_cast<std::size_t>(pair) % models.size()];
        const double m = exponents[static_cast<std::size_t>(pair / 3) % exponents.size()];
        const double floor = 0.05 + 0.3 * unit(rng), amp = 0.5 + 2.0 * unit(rng), w = 0.4 + 1.5 * unit(rng);
        const double lift = 0.5 * unit(rng), center = 3.0 * unit(rng), spread = 0.3 + unit(rng), shift = 0.02 * unit(rng);
        const RadialGrid grid(5.0, 100);
        const Field lo = sample(grid, [&](double r) { return floor + amp * std::exp(-r * r / (w * w)); });
        Field hi = lo;
        for (std::size_t i = 0; i < hi.size(); ++i) {
            const double z = (grid.r(i) - center) / spread;
            hi[i] += shift + lift * std::exp(-z * z);
        }
        SolverConfig cfg;
        cfg.dt = 0.01;
        cfg.t0 = 0.1;
        cfg.t1 = 0.5;
        SolverConfig cfg_hi = cfg;
        if (pair % 2 == 1) {
            cfg.outer_bc = BoundaryCondition::dirichlet(lo.back());
            cfg_hi.outer_bc = BoundaryCondition::dirichlet(hi.back());
        }
        const auto a = solve(lo, cfg, m, model, grid);
        const auto b = solve(hi, cfg_hi, m, model, grid);
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double gap = a.snapshots[k][i] - b.snapshots[k][i];
                worst_gap = std::max(worst_gap, gap);
                if (gap > 1e-12 * std::max(1.0, b.snapshots[k][i])) ++violations;
            }
        }
    }
    out.require(violations == 0, "comparison principle on 20 ordered pairs");
    out.detail << "max mass change/step " << worst_mass << ", dense oracle " << worst_dense
               << ", ordering violations " << violations << " (max u1-u2 " << worst_gap << ")";
    return out;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"aronson-benilan saturation on self-similar solutions", criterion1},
        {"li-yau equality on the gaussian kernel", criterion2},
        {"fast-diffusion bound on hyperbolic space", criterion3},
        {"initial-bound chain saturation and bump positivity", criterion4},
        {"two-regime bound on hyperbolic space and flat reduction", criterion5},
        {"bound-function analytics", criterion6},
        {"evolution-identity residual orders and CD defect", criterion7},
        {"solver quality", criterion8},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome res;
        const auto start = std::chrono::steady_clock::now();
        try {
            res = criteria[k].second();
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail << "exception: " << e.what();
        }
        if (!res.pass) ++failures;
        std::printf("%s criterion %zu (%s): %s (%.2f s)\n", res.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    res.detail.str().c_str(), seconds_since(start));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
