#include "support.hpp"

#include "surfcalc/identities/identities.hpp"
#include "surfcalc/variational/variational.hpp"

#include <catch_amalgamated.hpp>

#include <map>

using namespace surfcalc;
using Catch::Approx;

namespace {

const CheckRow& row(const std::vector<CheckRow>& rows, const std::string& name) {
    for (const auto& r : rows)
        if (r.name == name) return r;
    FAIL("missing row " << name);
    return rows.front();
}

const AmbientVectorFn wavy_field = [](const Vec3& x, double) {
    return Vec3(std::sin(x[1] + 0.2), std::cos(x[0]) * x[2], x[0] * x[1] + 0.3);
};

}  // namespace

TEST_CASE("stationary surface has vanishing velocity energies on both sides", "[identities]") {
    IdentityScenario sc;
    sc.spec = surfaces::sphere_cap(1.0, 0.0, 1.2);
    const auto rows = check_energy_representations(sc, 16, 32, 0.3, 0.01);
    REQUIRE(rows.size() == 6);
    for (const char* name : {"energy.div-velocity", "energy.pressure-work", "energy.shear", "energy.dilatation"}) {
        INFO(name);
        CHECK(std::abs(row(rows, name).lhs) <= 1e-14);
        CHECK(std::abs(row(rows, name).rhs) <= 1e-14);
    }
}

TEST_CASE("expanding hemisphere: both sides of the area-rate identity equal 2 R R' area0", "[identities]") {
    IdentityScenario sc;
    sc.spec = surfaces::expanding_sphere_cap();
    const double expected = 2.0 * 1.5 * 1.0 * 2.0 * pi;
    const CheckRow r = row(check_energy_representations(sc, 64, 64, 0.5, 0.5 / 64), "energy.div-velocity");
    CHECK(r.lhs == Approx(expected).epsilon(1e-3));
    CHECK(r.rhs == Approx(expected).epsilon(1e-3));
}

TEST_CASE("rigid translation has zero metric rate in the strain energies", "[identities]") {
    IdentityScenario sc;
    sc.spec = surfaces::translating_disk(1.0, 0.0, Vec3(0.4, -0.3, 0.2));
    const auto rows = check_energy_representations(sc, 16, 32, 0.5, 0.01);
    for (const char* name : {"energy.shear", "energy.dilatation", "energy.div-velocity"}) {
        INFO(name);
        CHECK(row(rows, name).rhs == 0.0);
        CHECK(std::abs(row(rows, name).lhs) <= 1e-12);
    }
}

TEST_CASE("energy representations converge at second order on a moving graph", "[identities][property]") {
    IdentityScenario sc;
    sc.spec = surfaces::graph_surface();
    sc.cs = constitutive::shear_thickening();
    std::map<std::string, std::vector<double>> err;
    std::vector<double> h;
    for (int n : {64, 128, 256}) {
        for (const auto& r : check_energy_representations(sc, n, n, 0.4, 0.4 / n)) err[r.name].push_back(r.abs_residual);
        h.push_back(Grid(sc.spec.domain, n, n).h());
    }
    for (const auto& [name, e] : err) {
        INFO(name << ": " << test::describe(e, h));
        CHECK((e.back() <= 1e-12 || test::min_order(e, h) >= 1.9));
    }
}

TEST_CASE("constant field on the hemisphere: curvature and boundary terms cancel", "[identities]") {
    const FlowMapSpec spec = surfaces::sphere_cap();
    const Grid grid(spec.domain, 64, 64);
    GeometryOptions opt;
    opt.analytic_curvature = true;
    const GridGeometry geo = build_geometry(spec, grid, 0.0, opt);
    const Vec3 c(0.3, -0.5, 1.2);
    const DivergenceTerms d = divergence_terms([&](const Vec3&, double) { return c; }, geo, make_rule(grid, InteriorRule::Simpson));
    CHECK(std::abs(d.divergence) < 1e-12);
    CHECK(-d.curvature == Approx(2 * pi * c[2]).epsilon(1e-5));
    CHECK(d.boundary == Approx(-2 * pi * c[2]).epsilon(1e-12));
}

TEST_CASE("divergence theorem converges for smooth fields", "[identities][property]") {
    for (const auto& spec : {surfaces::sphere_cap(), surfaces::graph_surface(), surfaces::flat_disk(1.0, 0.3)}) {
        std::vector<double> err, h;
        for (int n : {16, 32, 64}) {
            const Grid g = test::grid_for(spec, n);
            const GridGeometry geo = build_geometry(spec, g, 0.2);
            const CheckRow r = check_divergence_theorem(wavy_field, geo);
            err.push_back(r.abs_residual);
            h.push_back(r.h);
        }
        INFO(spec.name << ": " << test::describe(err, h));
        CHECK((err.back() <= 1e-12 || test::min_order(err, h) >= 1.9));
        CHECK(err.back() <= 1e-2);
    }
}

TEST_CASE("compactly supported tangential field on a flat disk integrates to zero divergence", "[identities]") {
    const FlowMapSpec spec = surfaces::flat_disk();
    const ParamScalarFn bump = interior_bump(spec.domain);
    const Grid g(spec.domain, 32, 64);
    const GridGeometry geo = build_geometry(spec, g, 0.0);
    const VectorField phi = make_field<Vec3>(g, [&](int k) {
        const Vec3& x = geo[k].x;
        return Vec3(bump(g.node(k / g.n(1), k % g.n(1)), 0.0) * Vec3(std::cos(x[1]), x[0] * x[0], 0.0));
    });
    CHECK(std::abs(surface_integral(surface_divergence(phi, geo), geo)) < 1e-3);
}

TEST_CASE("integration by parts converges in every ambient direction", "[identities][property]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const AmbientScalarFn f = [](const Vec3& x, double) { return std::cos(x[0] - 0.3 * x[1]) + x[2]; };
    const AmbientScalarFn g = [](const Vec3& x, double) { return std::exp(0.4 * x[1]) * (1.0 + x[0] * x[2]); };
    for (int j = 0; j < 3; ++j) {
        std::vector<double> err, h;
        for (int n : {128, 256, 512}) {
            const Grid grid(spec.domain, n, n);
            const GridGeometry geo = build_geometry(spec, grid, 0.1);
            const CheckRow r = check_integration_by_parts(f, g, j, geo, make_rule(grid));
            err.push_back(r.abs_residual);
            h.push_back(r.h);
        }
        INFO("direction " << j << ": " << test::describe(err, h));
        CHECK((err.back() <= 1e-12 || test::min_order(err, h) >= 1.9));
    }
}

TEST_CASE("transport theorem examples", "[identities]") {
    const ParamScalarFn one = [](const Vec2&, double) { return 1.0; };
    const CheckRow still = check_transport_theorem(one, surfaces::sphere_cap(), 16, 32, 0.5, 0.01);
    CHECK(still.lhs == 0.0);
    CHECK(std::abs(still.rhs) <= 1e-14);

    const CheckRow grow = check_transport_theorem(one, surfaces::expanding_sphere_cap(), 64, 64, 0.5, 0.5 / 64);
    const double rate = 2.0 * 1.5 * 2.0 * pi;
    CHECK(grow.lhs == Approx(rate).epsilon(1e-3));
    CHECK(grow.rhs == Approx(rate).epsilon(1e-3));
}

TEST_CASE("transported density satisfies the mass balance", "[identities][property]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const AmbientScalarFn rho0 = [](const Vec3& x, double) { return 1.0 + 0.3 * std::sin(x[0]) * x[1]; };
    const ParamScalarFn rho = [&](const Vec2& X, double t) {
        const auto g0 = tangents_at(spec, X, 0.0), gt = tangents_at(spec, X, t);
        return rho0(spec.reference(X), 0.0) * g0[0].cross(g0[1]).norm() / gt[0].cross(gt[1]).norm();
    };
    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const CheckRow r = check_transport_theorem(rho, spec, n, n, 0.5, 0.5 / n);
        CHECK(std::abs(r.lhs) <= 1e-12);
        err.push_back(std::abs(r.rhs));
        h.push_back(r.h);
    }
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("transport theorem converges for a time-dependent field", "[identities][property]") {
    const ParamScalarFn f = [](const Vec2& X, double t) { return std::cos(X[0]) * (1.0 + t * t) + 0.2 * std::sin(X[1]); };
    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const CheckRow r = check_transport_theorem(f, surfaces::expanding_sphere_cap(1.0, 1.0, 0.0, 1.2), n, 2 * n, 0.5, 0.5 / n);
        err.push_back(r.abs_residual);
        h.push_back(r.h);
    }
    CHECK(test::min_order(err, h) >= 1.9);
}
