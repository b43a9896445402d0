#include "support.hpp"

#include "surfcalc/variational/variational.hpp"

#include <catch_amalgamated.hpp>

using namespace surfcalc;
using Catch::Approx;

namespace {

const AmbientScalarFn zero_scalar = [](const Vec3&, double) { return 0.0; };
const AmbientScalarFn unit_scalar = [](const Vec3&, double) { return 1.0; };
const AmbientVectorFn zero_vector = [](const Vec3&, double) { return Vec3(Vec3::Zero()); };

double area_of(const GridGeometry& geo, const QuadratureRule& rule) { return surface_integral(ScalarField(geo.grid, 1.0), geo, rule); }

VariationalState smooth_state(const GridGeometry& geo, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    const AmbientVectorFn v = random_smooth_vector(rng);
    const AmbientScalarFn s = random_smooth_scalar(rng);
    return sample_state(
        geo, v, [s](const Vec3& x, double t) { return 1.0 + 0.3 * s(x, t); },
        [](const Vec3& x, double) { return 1.2 + 0.2 * std::sin(x[0] + x[2]); },
        [](const Vec3& x, double) { return std::cos(x[1] - x[0]); }, [](const Vec3& x, double) { return 1.0 + 0.1 * x[0] * x[0]; },
        [](const Vec3& x, double) { return Vec3(0.1, x[1], -0.2); });
}

/// e(r) = r^2: zero slope at the origin.
ConstitutiveSet flat_at_rest() {
    const EnergyDensity sq{[](double r) { return r * r; }, [](double r) { return 2.0 * r; }};
    return {"quadratic", {sq, sq, sq, sq}, laws::quadratic_pressure()};
}

}  // namespace

TEST_CASE("functionals of rest states reduce to area times the densities at zero", "[variational]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const Grid g(spec.domain, 17, 17);
    const GridGeometry geo = build_geometry(spec, g, 0.2);
    const QuadratureRule rule = make_rule(g);
    const ConstitutiveSet cs = constitutive::power_law();
    const VariationalState s = sample_state(geo, zero_vector, unit_scalar, unit_scalar, unit_scalar, unit_scalar, zero_vector);
    const double A = area_of(geo, rule);
    CHECK(energy_functional(Functional::Dissipation, s, geo, cs, rule) == Approx(-0.5 * A * (cs.e1()(0) + cs.e2()(0))).epsilon(1e-14));
    CHECK(energy_functional(Functional::ThermalDiffusion, s, geo, cs, rule) == Approx(-0.5 * A * cs.e3()(0)).margin(1e-14));
    CHECK(energy_functional(Functional::GeneralDiffusion, s, geo, cs, rule) == Approx(-0.5 * A * cs.e4()(0)).epsilon(1e-14));
    CHECK(energy_functional(Functional::Work, s, geo, cs, rule) == 0.0);
}

TEST_CASE("dissipation functional of the planar radial field", "[variational]") {
    const FlowMapSpec spec = test::flat_square();
    const Grid g(spec.domain, 9, 9);
    const GridGeometry geo = build_geometry(spec, g, 0.0);
    const QuadratureRule rule = make_rule(g);
    const VariationalState s = sample_state(
        geo, [](const Vec3& x, double) { return Vec3(x[0], x[1], 0.0); }, zero_scalar, unit_scalar, unit_scalar, unit_scalar, zero_vector);
    CHECK(energy_functional(Functional::Dissipation, s, geo, constitutive::newtonian(1.0, 1.0), rule) ==
          Approx(-0.5 * 4.0 * 6.0).epsilon(1e-13));
}

TEST_CASE("Gateaux derivative in a zero direction is zero", "[variational]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const Grid g(spec.domain, 17, 17);
    const GridGeometry geo = build_geometry(spec, g, 0.2);
    const VariationalState s = smooth_state(geo, 5);
    for (Functional f : {Functional::Dissipation, Functional::Work, Functional::ThermalDiffusion, Functional::GeneralDiffusion}) {
        VariationDirection d;
        d.kind = acts_on_velocity(f) ? DirectionKind::Velocity : DirectionKind::Scalar;
        d.vec = VectorField(g, Vec3::Zero());
        d.scalar = ScalarField(g, 0.0);
        INFO(to_string(f));
        CHECK(gateaux_numeric(f, s, d, geo, constitutive::power_law(), make_rule(g)).value == 0.0);
    }
}

TEST_CASE("central differences of a quadratic functional do not depend on eps", "[variational]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const Grid g(spec.domain, 17, 17);
    const GridGeometry geo = build_geometry(spec, g, 0.2);
    const VariationalState s = smooth_state(geo, 5);
    Xoshiro256ss rng(9);
    const VariationDirection d = random_direction(DirectionKind::Velocity, geo, rng, false);
    const GateauxResult r = gateaux_numeric(Functional::Dissipation, s, d, geo, constitutive::newtonian(), make_rule(g));
    REQUIRE(r.raw.size() == 3);
    CHECK(r.raw[0] == Approx(r.raw[2]).epsilon(1e-9));
    CHECK(r.raw[1] == Approx(r.raw[2]).epsilon(1e-9));
}

TEST_CASE("diverging difference quotients raise StepTooSmall", "[variational]") {
    CHECK_THROWS_AS(gateaux_numeric([](double e) { return e + 1e-3 * std::cbrt(e); }), StepTooSmall);
    CHECK(gateaux_numeric([](double e) { return 3.0 * e + e * e * e; }).value == Approx(3.0).epsilon(1e-12));
}

TEST_CASE("force vanishes at rest when the densities have zero slope", "[variational]") {
    const FlowMapSpec spec = surfaces::sphere_cap(1.0, 0.0, 1.2);
    const Grid g(spec.domain, 12, 24);
    const GridGeometry geo = build_geometry(spec, g, 0.0);
    const VariationalState s = sample_state(geo, zero_vector, zero_scalar, unit_scalar, unit_scalar, unit_scalar, zero_vector);
    for (bool tangential : {false, true}) {
        const ForceField f = variational_force(Functional::Dissipation, s, geo, flat_at_rest(), tangential);
        for (int k = 0; k < geo.size(); ++k) CHECK(f.vec[k].norm() == 0.0);
    }
}

TEST_CASE("constant tension pulls along the mean curvature vector", "[variational]") {
    const FlowMapSpec spec = surfaces::sphere_cap(1.0, 0.2, 1.4);
    const double sigma = 0.7;
    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const Grid g(spec.domain, n, n);
        const GridGeometry geo = build_geometry(spec, g, 0.0);
        const VariationalState s = sample_state(geo, zero_vector, [=](const Vec3&, double) { return sigma; }, unit_scalar, unit_scalar,
                                                unit_scalar, zero_vector);
        const ForceField f = variational_force(Functional::Work, s, geo, constitutive::newtonian(), false);
        err.push_back(test::max_error(f.vec, geo, [&](const MetricState& m, int) { return Vec3(-sigma * -2.0 * m.x); }));
        h.push_back(g.h());
    }
    CHECK(err.back() < 1e-2);
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("tangential forces have no normal component", "[variational][property]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const Grid g(spec.domain, 17, 17);
    const GridGeometry geo = build_geometry(spec, g, 0.3);
    const VariationalState s = smooth_state(geo, 3);
    for (Functional f : {Functional::Dissipation, Functional::Work}) {
        const ForceField force = variational_force(f, s, geo, constitutive::power_law(), true);
        for (int k = 0; k < geo.size(); ++k) CHECK(std::abs(geo[k].n.dot(force.vec[k])) <= 1e-12);
    }
}

TEST_CASE("random directions honour their support and tangency flags", "[variational][property]") {
    const FlowMapSpec spec = surfaces::sphere_cap(1.0, 0.0, 1.2);
    const Grid g(spec.domain, 16, 32);
    const GridGeometry geo = build_geometry(spec, g, 0.0);
    Xoshiro256ss rng(17);
    for (DirectionKind kind : {DirectionKind::Velocity, DirectionKind::Scalar})
        for (bool tangential : {false, true}) CHECK_NOTHROW(random_direction(kind, geo, rng, tangential).validate(geo));

    VariationDirection bad;
    bad.kind = DirectionKind::Velocity;
    bad.vec = VectorField(g, Vec3(0.0, 0.0, 1.0));
    bad.scalar = ScalarField(g, 0.0);
    bad.compact = true;
    CHECK_THROWS_AS(bad.validate(geo), DomainError);
    bad.compact = false;
    bad.tangential = true;
    CHECK_THROWS_AS(bad.validate(geo), DomainError);
}

TEST_CASE("Gateaux derivatives match force pairings at second order", "[variational][property]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const ConstitutiveSet cs = constitutive::shear_thickening();
    for (Functional f : {Functional::Dissipation, Functional::Work, Functional::ThermalDiffusion, Functional::GeneralDiffusion})
        for (bool tangential : {false, true}) {
            if (tangential && !acts_on_velocity(f)) continue;
            std::vector<double> err, h;
            for (int n : {17, 33, 65}) {
                const Grid g(spec.domain, n, n);
                const GridGeometry geo = build_geometry(spec, g, 0.3);
                Xoshiro256ss rng(21);
                const VariationDirection d =
                    random_direction(acts_on_velocity(f) ? DirectionKind::Velocity : DirectionKind::Scalar, geo, rng, tangential);
                const PairingCheck c = check_pairing(f, smooth_state(geo, 4), d, geo, cs, tangential, make_rule(g));
                err.push_back(std::abs(c.gateaux - c.pairing));
                h.push_back(g.h());
            }
            INFO(to_string(f) << (tangential ? " tangential" : "") << ": " << test::describe(err, h));
            CHECK((err.back() <= 1e-10 || test::min_order(err, h) >= 1.9));
        }
}

TEST_CASE("transported density examples", "[variational]") {
    const AmbientScalarFn rho0 = [](const Vec3& x, double) { return 1.0 + 0.2 * x[0]; };
    const FlowMapSpec still = surfaces::sphere_cap(1.0, 0.0, 1.2);
    const Grid g(still.domain, 12, 24);
    const auto series = density_transport(rho0, still, g, {0.0, 0.5, 1.0});
    for (int k = 0; k < g.size(); ++k) {
        CHECK(series[1][k] == series[0][k]);
        CHECK(series[2][k] == series[0][k]);
    }
    const FlowMapSpec cap = surfaces::expanding_sphere_cap(1.0, 1.0, 0.0, 1.2);
    const ScalarField r0 = density_transport(rho0, cap, g, 0.0);
    const ScalarField r1 = density_transport(rho0, cap, g, 0.7);
    for (int k = 0; k < g.size(); ++k) CHECK(r1[k] == Approx(r0[k] / (1.7 * 1.7)).epsilon(1e-13));
    const QuadratureRule rule = make_rule(g);
    CHECK(surface_integral(r1, build_geometry(cap, g, 0.7), rule) == Approx(surface_integral(r0, build_geometry(cap, g, 0.0), rule)).epsilon(1e-13));
}

TEST_CASE("area variation equals the integral of div z", "[variational][property]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    Xoshiro256ss rng(8);
    const AmbientVectorFn w = random_smooth_vector(rng);
    const ParamScalarFn bump = interior_bump(spec.domain);
    const ParamVectorFn z = [&](const Vec2& X, double t) { return Vec3(bump(X, t) * w(spec.position(X, t), t)); };
    std::vector<double> err, h;
    for (int n : {17, 33, 65}) {
        const CheckRow r = check_area_variation(spec, z, n, n, 0.4);
        err.push_back(r.abs_residual);
        h.push_back(r.h);
    }
    INFO(test::describe(err, h));
    CHECK(err.back() < 1e-3);
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("trivial action variations vanish", "[variational]") {
    ActionFamily still;
    still.spec = surfaces::graph_surface();
    still.z = [](const Vec2&, double) { return Vec3(Vec3::Zero()); };
    for (Action a : {Action::Kinetic, Action::Barotropic}) {
        const CheckRow r = check_action_variation(still, a, 9, 9, 8, 0.1);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs == 0.0);
    }

    ActionFamily rigid;
    rigid.spec = surfaces::translating_disk(1.0, 0.0, Vec3(0.3, 0.1, -0.2));
    rigid.pressure = laws::zero_pressure();
    const ParamScalarFn bump = interior_bump(rigid.spec.domain);
    rigid.z = [bump](const Vec2& X, double t) { return Vec3(std::sin(pi * t) * bump(X, t) * Vec3(1.0, X[0], 0.5)); };
    for (Action a : {Action::Kinetic, Action::Barotropic}) {
        const CheckRow r = check_action_variation(rigid, a, 8, 16, 8, 0.1);
        CHECK(std::abs(r.lhs) <= 1e-12);
        CHECK(std::abs(r.rhs) <= 1e-12);
    }
}
