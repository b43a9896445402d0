// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any criterion fails.

#include "surfcalc/calculus/fields.hpp"
#include "surfcalc/cli/scenario.hpp"
#include "surfcalc/cli/suites.hpp"
#include "surfcalc/geometry/invariants.hpp"
#include "surfcalc/identities/identities.hpp"
#include "surfcalc/solver/barotropic.hpp"
#include "surfcalc/solver/diffusion.hpp"
#include "surfcalc/solver/manufactured.hpp"
#include "surfcalc/variational/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace surfcalc;
namespace fs = std::filesystem;

namespace {

constexpr double kMinOrder = 1.9;
constexpr double kExactFloor = 1e-11;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double min_order(const std::vector<double>& err, const std::vector<double>& h) {
    double m = INFINITY;
    for (double o : observed_orders(err, h)) m = std::min(m, o);
    return m;
}

std::string orders_text(const std::vector<double>& err, const std::vector<double>& h) {
    std::ostringstream os;
    os.precision(3);
    os << "err";
    for (double e : err) os << ' ' << e;
    os << " order";
    for (double o : observed_orders(err, h)) os << ' ' << o;
    return os.str();
}

// 1. Mean curvature of the unit sphere band.
void curvature_order(Outcome& out) {
    const auto start = std::chrono::steady_clock::now();
    const FlowMapSpec cap = surfaces::sphere_cap(1.0, 0.2, 1.4);
    std::vector<double> err, h;
    for (int n : {32, 64, 128}) {
        const CheckRow r = check_mean_curvature(cap, [](const Vec3&, double) { return -2.0; }, n, n);
        err.push_back(r.abs_residual);
        h.push_back(r.h);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double order = min_order(err, h);
    out.detail << "max |H + 2| " << orders_text(err, h) << "; " << seconds << " s";
    out.require(order >= kMinOrder, "order >= 1.9");
    out.require(seconds < 10.0, "runtime < 10 s");
}

// 2. Six energy representations on the expanding cap R = 1 + t at t = 0.5.
void energy_identities(Outcome& out) {
    IdentityScenario sc;
    sc.spec = surfaces::expanding_sphere_cap(1.0, 1.0, 0.0, pi / 2);
    sc.cs = constitutive::power_law();
    std::map<std::string, std::vector<double>> err, rel;
    std::vector<double> h;
    for (int n : {32, 64, 128}) {
        const auto rows = check_energy_representations(sc, n, n, 0.5, 0.5 / n);
        out.require(rows.size() == 6, "six identity rows");
        for (const auto& r : rows) {
            err[r.name].push_back(r.abs_residual);
            rel[r.name].push_back(r.rel_residual);
        }
        h.push_back(rows.front().h);
    }
    for (const auto& [name, e] : err) {
        const double order = min_order(e, h);
        out.detail << ' ' << name << " rel " << rel[name].back() << " order " << order << ';';
        out.require(rel[name].back() <= 1e-3, name + " rel <= 1e-3");
        out.require(order >= kMinOrder, name + " order >= 1.9");
    }
}

// 3. Divergence theorem: exact cancellation for a constant field, convergence for a random one.
void divergence_theorem(Outcome& out) {
    const FlowMapSpec hemi = surfaces::sphere_cap(1.0, 0.0, pi / 2);
    const Vec3 c(0.3, -0.5, 1.0);
    {
        const Grid grid(hemi.domain, 128, 128);
        GeometryOptions opt;
        opt.analytic_curvature = true;
        const GridGeometry geo = build_geometry(hemi, grid, 0.0, opt);
        const DivergenceTerms d = divergence_terms([&](const Vec3&, double) { return c; }, geo, make_rule(grid, InteriorRule::Simpson));
        const double scale = std::max(std::abs(d.curvature), std::abs(d.boundary));
        const double rel = std::abs(d.divergence + d.curvature - d.boundary) / scale;
        out.detail << "constant field rel " << rel << " (curvature term " << -d.curvature << ", boundary " << d.boundary << ");";
        out.require(rel <= 1e-6, "constant-field relative residual <= 1e-6");
    }
    const AmbientVectorFn phi = fields::find_vector(fields::vector_catalog(), "random")->fn;
    std::vector<double> err, h;
    for (int n : {32, 64, 128}) {
        const Grid grid(hemi.domain, n, n);
        const CheckRow r = check_divergence_theorem(phi, build_geometry(hemi, grid, 0.0));
        err.push_back(r.abs_residual);
        h.push_back(r.h);
    }
    out.detail << " random field " << orders_text(err, h);
    out.require(min_order(err, h) >= kMinOrder, "random-field order >= 1.9");
}

// 4. Gateaux derivatives against force pairings, 5 seeded directions per functional.
void variational_pairing(Outcome& out) {
    const FlowMapSpec spec = surfaces::graph_surface();
    const Grid grid(spec.domain, 128, 128);
    const GridGeometry geo = build_geometry(spec, grid, 0.3);
    Xoshiro256ss rng(7);
    const AmbientVectorFn vf = random_smooth_vector(rng);
    const AmbientScalarFn sf = random_smooth_scalar(rng);
    const VariationalState s = sample_state(
        geo, vf, [&](const Vec3& x, double t) { return 1.0 + 0.3 * sf(x, t); },
        [](const Vec3& x, double) { return 1.2 + 0.2 * std::sin(x[0] + x[2]); }, [](const Vec3& x, double) { return std::cos(x[1] - x[0]); },
        [](const Vec3& x, double) { return 1.0 + 0.1 * x[0] * x[0]; }, [](const Vec3& x, double) { return Vec3(0.1, x[1], -0.2); });
    const ConstitutiveSet cs = constitutive::power_law();
    const QuadratureRule rule = make_rule(grid, InteriorRule::Simpson);
    for (Functional f : {Functional::Dissipation, Functional::Work, Functional::ThermalDiffusion, Functional::GeneralDiffusion})
        for (bool tangential : {false, true}) {
            Xoshiro256ss dirs(11);
            double worst = 0.0;
            for (int q = 0; q < 5; ++q) {
                const VariationDirection d =
                    random_direction(acts_on_velocity(f) ? DirectionKind::Velocity : DirectionKind::Scalar, geo, dirs, tangential);
                worst = std::max(worst, check_pairing(f, s, d, geo, cs, tangential, rule).relative);
            }
            const std::string label = to_string(f) + (tangential ? "/tangential" : "");
            out.detail << ' ' << label << ' ' << worst << ';';
            out.require(worst <= 1e-3, label + " <= 1e-3");
        }
}

// 5. Action variations and transported-density mass.
void action_variation(Outcome& out) {
    for (const FlowMapSpec& spec : {surfaces::graph_surface(), surfaces::expanding_sphere_cap(1.0, 1.0, 0.0, 1.2)}) {
        Xoshiro256ss rng(3);
        const AmbientVectorFn w = random_smooth_vector(rng);
        for (Action a : {Action::Kinetic, Action::Barotropic}) {
            ActionFamily fam;
            fam.spec = spec;
            fam.pressure = laws::quadratic_pressure();
            fam.rho0 = [](const Vec3& x, double) { return 1.0 + 0.2 * x[0]; };
            const ParamScalarFn shape = a == Action::Kinetic ? interior_bump(spec.domain) : edge_factor(spec.domain);
            const auto reference = spec.position;
            fam.z = [=](const Vec2& X, double t) { return Vec3(std::sin(pi * t) * shape(X, t) * w(reference(X, 0.0), 0.0)); };
            std::vector<double> err, h;
            for (int n : {16, 32, 64}) {
                const int n2 = spec.domain.kind() == DomainKind::DiskPolar ? 2 * n : n;
                const CheckRow r = check_action_variation(fam, a, n, n2, n, 2.0 / n);
                err.push_back(r.abs_residual);
                h.push_back(r.h);
            }
            const std::string label = spec.name + (a == Action::Kinetic ? "/kinetic" : "/barotropic");
            const bool exact = *std::max_element(err.begin(), err.end()) <= kExactFloor;
            out.detail << ' ' << label << ' ' << orders_text(err, h) << (exact ? " (exact to round-off)" : "") << ';';
            out.require(exact || min_order(err, h) >= kMinOrder, label + " order >= 1.9");
        }
    }

    const AmbientScalarFn rho0 = [](const Vec3& x, double) { return 1.0 + 0.3 * std::sin(2.0 * x[0]) * x[1]; };
    auto mass_drift = [&](const FlowMapSpec& spec) {
        const Grid grid(spec.domain, 128, 128);
        const QuadratureRule rule = make_rule(grid);
        const double m0 = surface_integral(density_transport(rho0, spec, grid, 0.0), build_geometry(spec, grid, 0.0), rule);
        double drift = 0.0;
        for (double t : {0.25, 0.5, 1.0})
            drift = std::max(drift, std::abs(surface_integral(density_transport(rho0, spec, grid, t), build_geometry(spec, grid, t), rule) - m0));
        return drift / std::abs(m0);
    };
    const double still = mass_drift(surfaces::sphere_cap(1.0, 0.0, 1.2));
    const double growing = mass_drift(surfaces::expanding_sphere_cap(1.0, 1.0, 0.0, 1.2));
    out.detail << " mass drift stationary " << still << ", expanding " << growing;
    out.require(still <= 1e-8, "stationary mass drift <= 1e-8");
    out.require(growing <= 1e-6, "expanding mass drift <= 1e-6");
}

// 6. Barotropic flat-disk run and the Neumann decay rate.
void solvers(Outcome& out) {
    const FlowMapSpec disk = surfaces::flat_disk();
    const AmbientScalarFn pulse = fields::find_scalar(fields::scalar_catalog(), "pulse")->fn;
    std::vector<double> err, h;
    double drift = 0.0;
    for (int n : {32, 64, 128}) {
        const Grid grid(disk.domain, n, n);
        BarotropicOptions opt;
        opt.pressure = laws::quadratic_pressure();
        opt.cfl = 0.4;
        opt.boundary = BoundaryMode::NoSlip;
        BarotropicSolver solver(disk, grid, opt);
        FluidState st = FluidState::zeros(grid);
        st.rho = sample_scalar(solver.geometry(0.0), pulse);
        const BalanceReport rep = solver.run(st, 1.0);
        err.push_back(rep.max_energy_residual());
        h.push_back(grid.h());
        drift = rep.relative_mass_drift();
    }
    out.detail << "mass drift " << drift << "; energy law " << orders_text(err, h) << ';';
    out.require(drift <= 1e-6, "mass drift <= 1e-6");
    out.require(min_order(err, h) >= kMinOrder, "energy-law order >= 1.9");

    const Grid grid(disk.domain, 128, 128);
    DiffusionSolver solver(disk, grid, laws::linear(1.0));
    FluidState st = FluidState::zeros(grid);
    st.C = sample_scalar(solver.geometry(0.0), fields::find_scalar(fields::scalar_catalog(), "neumann-mode")->fn);
    const ScalarField profile = st.C;
    solver.run(st, 0.025);
    const ScalarField early = solver.last_state().C;
    solver.run(solver.last_state(), 0.05);
    const double rate = projected_decay_rate(early, solver.last_state().C, 0.025, profile, solver.geometry(0.05), solver.rule());
    const double expected = bessel_j1_prime_root * bessel_j1_prime_root;
    const double rel = std::abs(rate / expected - 1.0);
    out.detail << " Neumann rate " << rate << " vs " << expected << " (rel " << rel << ")";
    out.require(rel <= 0.01, "decay rate within 1%");
}

// 7. Momentum and angular-momentum balances; moment of a compact symmetric stress.
void conservation(Outcome& out) {
    const ConstitutiveSet cs = constitutive::newtonian();
    const ManufacturedFlow flow = manufactured::swirling(cs);
    std::vector<double> em, ea, h;
    for (int n : {32, 64, 128}) {
        const auto rows = check_momentum_balances(flow, cs, n, n, 0.0, 1.0, n / 2);
        em.push_back(rows.at(0).abs_residual);
        ea.push_back(rows.at(1).abs_residual);
        h.push_back(rows.at(0).h);
    }
    out.detail << "momentum " << orders_text(em, h) << "; angular " << orders_text(ea, h) << ';';
    out.require(min_order(em, h) >= kMinOrder, "momentum order >= 1.9");
    out.require(min_order(ea, h) >= kMinOrder, "angular-momentum order >= 1.9");

    const FlowMapSpec cap = surfaces::sphere_cap(1.0, 0.0, 1.2);
    const CheckRow m = check_angular_moment(cap, compact_symmetric_stress(cap), 128, 128);
    out.detail << " moment " << m.abs_residual;
    out.require(m.abs_residual <= 1e-3, "moment <= 1e-3");
}

// 8. Entropy production sign and thermodynamic residual orders.
void thermodynamics(Outcome& out) {
    std::vector<std::pair<FluidState, GridGeometry>> samples;
    for (const ManufacturedFlow& flow : {manufactured::thermal(surfaces::expanding_sphere_cap(1.0, 1.0, 0.0, 1.2)),
                                         manufactured::thermal(surfaces::graph_surface()), manufactured::swirling(constitutive::newtonian())}) {
        const int n = 64;
        const Grid grid(flow.spec.domain, n, flow.spec.domain.kind() == DomainKind::DiskPolar ? 2 * n : n);
        GridGeometry geo = build_geometry(flow.spec, grid, 0.5);
        samples.emplace_back(flow.sample(geo), std::move(geo));
    }
    int dissipative = 0;
    for (const auto& e : constitutive::catalog()) {
        const ConstitutiveSet cs = e.make({});
        if (!cs.dissipative()) continue;
        ++dissipative;
        double worst = INFINITY;
        for (const auto& [st, geo] : samples) worst = std::min(worst, audit_entropy_production(st, geo, cs).min_value);
        out.detail << ' ' << cs.name << " min production " << worst << ';';
        out.require(worst >= -1e-12, cs.name + " production >= -1e-12");
    }
    out.require(dissipative >= 1, "catalog has dissipative sets");

    const ConstitutiveSet cs = constitutive::newtonian();
    for (const FlowMapSpec& spec : {surfaces::expanding_sphere_cap(1.0, 1.0, 0.0, 1.2), surfaces::graph_surface()}) {
        const ManufacturedFlow flow = manufactured::thermal(spec);
        std::map<std::string, std::vector<double>> l2, linf;
        std::vector<double> h;
        for (int n : {16, 32, 64}) {
            const Grid grid(spec.domain, n, n);
            const double dt = 0.4 / n;
            const ManufacturedLevels lv = sample_levels(flow, grid, 0.5, dt);
            const ManufacturedSources src = manufactured_sources(flow, cs, grid, 0.5);
            for (const auto& r : residual_thermodynamics(lv, cs, &src).summaries(lv.geo, make_rule(grid), dt)) {
                l2[r.name].push_back(r.l2);
                linf[r.name].push_back(r.linf);
            }
            h.push_back(grid.h());
        }
        double worst = INFINITY;
        for (const auto& [name, e] : l2) {
            worst = std::min({worst, min_order(e, h), min_order(linf[name], h)});
            out.require(min_order(e, h) >= kMinOrder && min_order(linf[name], h) >= kMinOrder, spec.name + ' ' + name + " order >= 1.9");
        }
        out.detail << ' ' << spec.name << " residual orders >= " << worst << ';';
    }
}

// 9. Every bundled scenario, run twice (one and two threads), writes byte-identical CSVs.
void determinism(Outcome& out) {
    const fs::path root = fs::temp_directory_path() / "surfcalc_acceptance";
    fs::remove_all(root);
    std::vector<fs::path> scenarios;
    for (const auto& e : fs::directory_iterator(SURFCALC_SCENARIO_DIR))
        if (e.path().extension() == ".json") scenarios.push_back(e.path());
    std::sort(scenarios.begin(), scenarios.end());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::size_t compared = 0;
    for (const fs::path& path : scenarios) {
        const cli::Scenario sc = cli::load_scenario(path.string());
        const std::string stem = path.stem().string();
        const auto a = cli::run_suite(sc, (root / stem / "a").string(), 1);
        const auto b = cli::run_suite(sc, (root / stem / "b").string(), 2);
        out.require(a.files == b.files, stem + " file lists match");
        for (const auto& f : a.files) {
            ++compared;
            out.require(slurp(root / stem / "a" / f) == slurp(root / stem / "b" / f), stem + '/' + f + " identical");
        }
    }
    out.detail << scenarios.size() << " scenarios, " << compared << " CSV files compared";
    out.require(compared > 0, "some CSVs compared");
    fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> only(argv + 1, argv + argc);
    struct Criterion {
        const char* id;
        const char* title;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria = {{"AC1", "curvature order", curvature_order},
                                             {"AC2", "energy identities", energy_identities},
                                             {"AC3", "divergence theorem", divergence_theorem},
                                             {"AC4", "variational pairing", variational_pairing},
                                             {"AC5", "action variation and transported mass", action_variation},
                                             {"AC6", "barotropic and diffusion solvers", solvers},
                                             {"AC7", "conservation audit", conservation},
                                             {"AC8", "thermodynamics", thermodynamics},
                                             {"AC9", "determinism", determinism}};
    int failures = 0;
    int ran = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        ++ran;
        Outcome out;
        out.detail.precision(3);
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << " [exception: " << e.what() << "]";
        }
        std::printf("%s %s %s: %s\n", c.id, out.pass ? "PASS" : "FAIL", c.title, out.detail.str().c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    std::printf("%d of %d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
