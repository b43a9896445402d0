#pragma once

#include "surfcalc/cli/scenario.hpp"
#include "surfcalc/geometry/invariants.hpp"
#include "surfcalc/identities/identities.hpp"
#include "surfcalc/solver/barotropic.hpp"
#include "surfcalc/solver/diffusion.hpp"
#include "surfcalc/solver/manufactured.hpp"
#include "surfcalc/variational/variational.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <set>
#include <thread>

namespace surfcalc::cli {

/// Everything one suite produced at one resolution.
struct ResolutionResult {
    int n = 0;
    std::vector<CheckRow> rows;
    std::optional<BalanceReport> balance;
    std::vector<ResidualSummary> residuals;
    std::string error;  // non-empty when the suite threw
};

struct SuiteResult {
    Suite suite = Suite::Geometry;
    std::vector<ResolutionResult> levels;  // ascending resolution
    std::set<std::string> order_exempt;    // rows held to the residual bound only
};

/// Pass/fail of one named check across the refinement.
struct Verdict {
    Suite suite = Suite::Geometry;
    std::string name;
    double h_coarse = 0.0, h_fine = 0.0;
    double residual_coarse = 0.0, residual_fine = 0.0;  // absolute residuals feeding the order
    double order = std::numeric_limits<double>::quiet_NaN();
    double criterion = 0.0;  // residual compared with the tolerance (finest resolution)
    Tolerance tolerance;
    bool order_required = false;
    bool passed = false;
    std::string reason;
};

namespace detail {

inline CheckRow zero_target_row(const std::string& name, double h, double dt, double value) {
    CheckRow r = make_row(name, h, dt, value, 0.0);
    r.rel_residual = std::abs(value);
    return r;
}

inline ResolutionResult run_geometry(const Scenario& sc, int n) {
    ResolutionResult out;
    out.rows = check_geometry_invariants(sc.make_surface(), n, sc.azimuthal(n), {sc.t_start, sc.t_probe, sc.t_end});
    for (auto& r : out.rows) r.rel_residual = r.abs_residual;
    return out;
}

inline ResolutionResult run_identities(const Scenario& sc, int n) {
    ResolutionResult out;
    const FlowMapSpec spec = sc.make_surface();
    const Grid grid(spec.domain, n, sc.azimuthal(n));
    const double t = sc.t_probe, dt = sc.time_step.probe(grid.h());
    IdentityScenario id;
    id.spec = spec;
    id.cs = sc.make_constitutive();
    id.sigma = sc.scalar(sc.fields.sigma);
    id.theta = sc.scalar(sc.fields.theta);
    id.C = sc.scalar(sc.fields.concentration);
    out.rows = check_energy_representations(id, n, sc.azimuthal(n), t, dt);
    for (auto& r : out.rows) r.dt = dt;

    const GridGeometry geo = build_geometry(spec, grid, t);
    const QuadratureRule rule = make_rule(grid);
    out.rows.push_back(check_divergence_theorem(sc.vector(sc.fields.divergence_field), geo, rule));
    const AmbientScalarFn f = sc.scalar(sc.fields.test_function), w = sc.scalar(sc.fields.weight);
    for (int j = 0; j < 3; ++j) out.rows.push_back(check_integration_by_parts(f, w, j, geo, rule, "integration-by-parts.x" + std::to_string(j + 1)));
    out.rows.push_back(check_transport_theorem(pull(spec, f), spec, n, sc.azimuthal(n), t, dt));
    return out;
}

inline ResolutionResult run_variational(const Scenario& sc, int n) {
    ResolutionResult out;
    const FlowMapSpec spec = sc.make_surface();
    const Grid grid(spec.domain, n, sc.azimuthal(n));
    const GridGeometry geo = build_geometry(spec, grid, sc.t_probe);
    const ConstitutiveSet cs = sc.make_constitutive();
    const QuadratureRule rule = make_rule(grid, InteriorRule::Simpson);
    const VariationalState s = sample_state(geo, sc.vector(sc.fields.velocity), sc.scalar(sc.fields.sigma), sc.scalar(sc.fields.theta),
                                            sc.scalar(sc.fields.concentration), sc.scalar(sc.fields.density), sc.vector(sc.fields.force));
    for (Functional f : {Functional::Dissipation, Functional::Work, Functional::ThermalDiffusion, Functional::GeneralDiffusion})
        for (bool tangential : {false, true}) {
            Xoshiro256ss rng(sc.seed * 7919 + 11);
            for (int q = 0; q < 5; ++q) {
                const auto d = random_direction(acts_on_velocity(f) ? DirectionKind::Velocity : DirectionKind::Scalar, geo, rng, tangential);
                const PairingCheck c = check_pairing(f, s, d, geo, cs, tangential, rule);
                CheckRow r = make_row(to_string(f) + (tangential ? ".tangential." : ".plain.") + std::to_string(q), grid.h(), 0.0, c.gateaux,
                                      c.pairing);
                r.rel_residual = c.relative;
                out.rows.push_back(r);
            }
        }
    return out;
}

inline ResolutionResult run_action(const Scenario& sc, int n) {
    ResolutionResult out;
    const FlowMapSpec spec = sc.make_surface();
    const Grid grid(spec.domain, n, sc.azimuthal(n));
    const double horizon = sc.t_end - sc.t_start;
    Xoshiro256ss rng(sc.seed * 104729 + 3);
    const AmbientVectorFn W = random_smooth_vector(rng);
    for (Action a : {Action::Kinetic, Action::Barotropic}) {
        ActionFamily fam;
        fam.spec = spec;
        fam.horizon = horizon;
        fam.rho0 = sc.scalar(sc.fields.density);
        fam.pressure = sc.make_pressure();
        const ParamScalarFn shape = a == Action::Kinetic ? interior_bump(spec.domain) : edge_factor(spec.domain);
        const auto reference = spec.position;
        fam.z = [=](const Vec2& X, double t) { return Vec3(std::sin(pi * t / horizon) * shape(X, t) * W(reference(X, 0.0), 0.0)); };
        CheckRow r = check_action_variation(fam, a, n, sc.azimuthal(n), n, 2.0 * grid.h());
        r.name = a == Action::Kinetic ? "action.kinetic" : "action.barotropic";
        out.rows.push_back(r);
    }
    return out;
}

inline ResolutionResult run_barotropic(const Scenario& sc, int n) {
    ResolutionResult out;
    const FlowMapSpec spec = sc.make_surface();
    const Grid grid(spec.domain, n, sc.azimuthal(n));
    BarotropicOptions opt;
    opt.pressure = sc.make_pressure();
    opt.boundary = sc.bc_mode;
    if (sc.time_step.policy == StepPolicy::Cfl) opt.cfl = sc.time_step.value;
    BarotropicSolver solver(spec, grid, opt);
    const GridGeometry& geo = solver.geometry(sc.t_start);
    FluidState st = FluidState::zeros(grid, sc.t_start);
    st.rho = sample_scalar(geo, sc.scalar(sc.fields.density));
    st.v = sample_vector(geo, sc.vector(sc.fields.velocity));
    for (int k = 0; k < grid.size(); ++k) st.v[k] = geo[k].P * st.v[k];
    const BalanceReport rep = solver.run(st, sc.t_end, sc.time_step.solver(grid.h()));
    const double dt = rep.samples.size() > 1 ? rep.samples[1].t - rep.samples[0].t : 0.0;
    out.rows.push_back(zero_target_row("mass-drift", grid.h(), dt, rep.relative_mass_drift()));
    out.rows.push_back(zero_target_row("energy-law", grid.h(), dt, rep.max_energy_residual()));
    out.balance = rep;
    return out;
}

inline ResolutionResult run_diffusion(const Scenario& sc, int n) {
    ResolutionResult out;
    const FlowMapSpec spec = sc.make_surface();
    const Grid grid(spec.domain, n, sc.azimuthal(n));
    DiffusionSolver solver(spec, grid, sc.make_constitutive().e4());
    const GridGeometry& geo = solver.geometry(sc.t_start);
    FluidState st = FluidState::zeros(grid, sc.t_start);
    st.C = sample_scalar(geo, sc.scalar(sc.fields.concentration));
    const BalanceReport rep = solver.run(st, sc.t_end, sc.time_step.solver(grid.h()));
    const double total = std::max(std::abs(rep.samples.front().concentration), 1e-300);
    const double dt = rep.samples.size() > 1 ? rep.samples[1].t - rep.samples[0].t : 0.0;
    out.rows.push_back(zero_target_row("concentration-drift", grid.h(), dt, rep.concentration_drift() / total));
    out.balance = rep;
    return out;
}

inline ResolutionResult run_manufactured(const Scenario& sc, int n) {
    ResolutionResult out;
    const ManufacturedFlow flow = manufactured::thermal(sc.make_surface());
    const ConstitutiveSet cs = sc.make_constitutive();
    const Grid grid(flow.spec.domain, n, sc.azimuthal(n));
    const double dt = sc.time_step.probe(grid.h());
    const ManufacturedLevels lv = sample_levels(flow, grid, sc.t_probe, dt);
    const ManufacturedSources src = manufactured_sources(flow, cs, grid, sc.t_probe);
    const QuadratureRule rule = make_rule(grid);
    out.residuals = residual_generalized_system(lv, cs, &src).summaries(lv.geo, rule, dt);
    const auto thermo = residual_thermodynamics(lv, cs, &src).summaries(lv.geo, rule, dt);
    out.residuals.insert(out.residuals.end(), thermo.begin(), thermo.end());
    for (const auto& s : out.residuals) out.rows.push_back(zero_target_row(s.name, s.h, s.dt, s.l2));
    return out;
}

inline ResolutionResult run_entropy(const Scenario& sc, int n) {
    ResolutionResult out;
    const ManufacturedFlow flow = manufactured::thermal(sc.make_surface());
    const Grid grid(flow.spec.domain, n, sc.azimuthal(n));
    const GridGeometry geo = build_geometry(flow.spec, grid, sc.t_probe);
    const EntropyAudit a = audit_entropy_production(flow.sample(geo), geo, sc.make_constitutive());
    CheckRow r = make_row("entropy-production.min", grid.h(), 0.0, a.min_value, 0.0);
    r.abs_residual = r.rel_residual = std::max(0.0, -a.min_value);
    out.rows.push_back(r);
    return out;
}

inline ResolutionResult run_one(Suite s, const Scenario& sc, int n) {
    switch (s) {
        case Suite::Geometry: return run_geometry(sc, n);
        case Suite::Identities: return run_identities(sc, n);
        case Suite::Variational: return run_variational(sc, n);
        case Suite::Action: return run_action(sc, n);
        case Suite::Barotropic: return run_barotropic(sc, n);
        case Suite::Diffusion: return run_diffusion(sc, n);
        case Suite::Manufactured: return run_manufactured(sc, n);
        case Suite::Entropy: return run_entropy(sc, n);
    }
    return {};
}

inline std::set<std::string> order_exempt(Suite s) {
    if (s == Suite::Barotropic) return {"mass-drift"};
    if (s == Suite::Entropy) return {"entropy-production.min"};
    if (s == Suite::Diffusion) return {"concentration-drift"};
    return {};
}

}  // namespace detail

/// Thread count: explicit value, else SURFCALC_THREADS, else 1.
inline int resolve_threads(std::optional<int> requested) {
    if (requested && *requested > 0) return *requested;
    if (const char* env = std::getenv("SURFCALC_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        throw ConfigError("SURFCALC_THREADS", std::string("expected a positive integer, got '") + env + "'");
    }
    return 1;
}

/// Runs every selected suite at every resolution. Tasks may run concurrently; results land in
/// fixed slots so the output does not depend on scheduling.
inline std::vector<SuiteResult> execute(const Scenario& sc, int threads) {
    std::vector<SuiteResult> results;
    for (Suite s : sc.suites) {
        SuiteResult r;
        r.suite = s;
        r.levels.resize(sc.resolutions.size());
        r.order_exempt = detail::order_exempt(s);
        results.push_back(std::move(r));
    }
    const std::size_t per = sc.resolutions.size();
    const std::size_t total = results.size() * per;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < total; task = next++) {
            SuiteResult& sr = results[task / per];
            ResolutionResult& slot = sr.levels[task % per];
            const int n = sc.resolutions[task % per];
            try {
                slot = detail::run_one(sr.suite, sc, n);
            } catch (const std::exception& e) {
                slot = ResolutionResult{};
                slot.error = e.what();
            }
            slot.n = n;
        }
    };
    const int count = std::max(1, std::min<int>(threads, static_cast<int>(total)));
    std::vector<std::thread> pool;
    for (int q = 1; q < count; ++q) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return results;
}

/// All rows of a suite over the refinement with observed orders filled in.
inline std::vector<CheckRow> collect_rows(const SuiteResult& sr) {
    std::vector<CheckRow> rows;
    for (const auto& lvl : sr.levels) rows.insert(rows.end(), lvl.rows.begin(), lvl.rows.end());
    assign_orders(rows);
    return rows;
}

inline std::vector<Verdict> judge(const SuiteResult& sr, const Tolerance& tol) {
    std::vector<Verdict> out;
    for (const auto& lvl : sr.levels)
        if (!lvl.error.empty()) {
            Verdict v;
            v.suite = sr.suite;
            v.name = "error.n" + std::to_string(lvl.n);
            v.tolerance = tol;
            v.criterion = std::numeric_limits<double>::quiet_NaN();
            v.reason = lvl.error;
            out.push_back(v);
        }
    if (!out.empty()) return out;

    const std::vector<CheckRow> rows = collect_rows(sr);
    std::vector<std::string> names;
    for (const auto& r : rows)
        if (std::find(names.begin(), names.end(), r.name) == names.end()) names.push_back(r.name);
    for (const auto& name : names) {
        std::vector<const CheckRow*> seq;
        for (const auto& r : rows)
            if (r.name == name) seq.push_back(&r);
        std::stable_sort(seq.begin(), seq.end(), [](const CheckRow* a, const CheckRow* b) { return a->h > b->h; });
        const CheckRow& fine = *seq.back();
        const CheckRow& coarse = seq.size() > 1 ? *seq[seq.size() - 2] : fine;
        Verdict v;
        v.suite = sr.suite;
        v.name = name;
        v.h_coarse = coarse.h;
        v.h_fine = fine.h;
        v.residual_coarse = coarse.abs_residual;
        v.residual_fine = fine.abs_residual;
        v.order = fine.observed_order;
        v.criterion = fine.rel_residual;
        v.tolerance = tol;
        v.order_required = tol.min_order && !sr.order_exempt.count(name) && fine.abs_residual > tol.exact_floor;
        const bool residual_ok = v.criterion <= tol.residual;
        const bool order_ok = !v.order_required || v.order >= *tol.min_order;
        v.passed = residual_ok && order_ok;
        if (!residual_ok) v.reason = "residual " + format_number(v.criterion) + " above " + format_number(tol.residual);
        else if (!order_ok) v.reason = "order " + format_number(v.order) + " below " + format_number(*tol.min_order);
        out.push_back(v);
    }
    return out;
}

inline const char* orders_csv_header() {
    return "suite,name,h_coarse,h_fine,residual_coarse,residual_fine,order,criterion,tolerance,min_order,passed";
}

inline void write_orders_csv(std::ostream& os, const std::vector<Verdict>& verdicts) {
    os << orders_csv_header() << '\n';
    for (const auto& v : verdicts)
        os << to_string(v.suite) << ',' << v.name << ',' << format_number(v.h_coarse) << ',' << format_number(v.h_fine) << ','
           << format_number(v.residual_coarse) << ',' << format_number(v.residual_fine) << ',' << format_number(v.order) << ','
           << format_number(v.criterion) << ',' << format_number(v.tolerance.residual) << ','
           << (v.order_required ? format_number(*v.tolerance.min_order) : std::string("none")) << ',' << (v.passed ? "pass" : "fail")
           << '\n';
}

struct RunSummary {
    int exit_code = 0;
    std::vector<Verdict> verdicts;
    std::vector<std::string> files;  // written reports, relative to the output directory
};

/// Executes the selected suites and writes the reports under `out_dir`:
/// <suite>_checks.csv, <suite>_balance_n<N>.csv (solver suites), manufactured_residuals_n<N>.csv
/// and orders.csv. Exit code 1 when any check misses its tolerance; no suites, no files.
inline RunSummary run_suite(const Scenario& sc, const std::string& out_dir, int threads = 1, std::ostream* log = nullptr) {
    RunSummary summary;
    if (sc.suites.empty()) return summary;
    const std::vector<SuiteResult> results = execute(sc, threads);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto path = [&](const std::string& file) {
        summary.files.push_back(file);
        return (fs::path(out_dir) / file).string();
    };
    for (const auto& sr : results) {
        const std::string tag = to_string(sr.suite);
        write_check_csv(path(tag + "_checks.csv"), collect_rows(sr));
        for (const auto& lvl : sr.levels) {
            if (lvl.balance) write_balance_csv(path(tag + "_balance_n" + std::to_string(lvl.n) + ".csv"), *lvl.balance);
            if (!lvl.residuals.empty()) write_residual_csv(path(tag + "_residuals_n" + std::to_string(lvl.n) + ".csv"), lvl.residuals);
        }
        const auto v = judge(sr, sc.tolerance(sr.suite));
        summary.verdicts.insert(summary.verdicts.end(), v.begin(), v.end());
    }
    {
        std::ofstream os(path("orders.csv"), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write orders.csv under " + out_dir);
        write_orders_csv(os, summary.verdicts);
    }
    for (const auto& v : summary.verdicts) {
        if (!v.passed) summary.exit_code = 1;
        if (log && !v.passed) *log << "FAIL " << to_string(v.suite) << ' ' << v.name << ": " << v.reason << '\n';
    }
    if (log) {
        const auto failed = std::count_if(summary.verdicts.begin(), summary.verdicts.end(), [](const Verdict& v) { return !v.passed; });
        *log << sc.name << ": " << summary.verdicts.size() - static_cast<std::size_t>(failed) << '/' << summary.verdicts.size()
             << " checks passed\n";
    }
    return summary;
}

}  // namespace surfcalc::cli
