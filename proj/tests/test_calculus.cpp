#include "support.hpp"

#include "surfcalc/calculus/constitutive.hpp"
#include "surfcalc/calculus/fields.hpp"
#include "surfcalc/calculus/material_derivative.hpp"
#include "surfcalc/calculus/operators.hpp"

#include <catch_amalgamated.hpp>

using namespace surfcalc;
using Catch::Approx;

namespace {

GridGeometry geometry(const FlowMapSpec& spec, int n, double t = 0.0) { return build_geometry(spec, test::grid_for(spec, n), t); }

const AmbientScalarFn wavy = [](const Vec3& x, double) { return std::sin(x[0] + 0.4) * std::cos(0.8 * x[1]) + 0.3 * x[2] * x[0]; };
const AmbientScalarFn bumpy = [](const Vec3& x, double) { return std::exp(-0.5 * (x - Vec3(0.1, 0.2, 0.3)).squaredNorm()); };
const AmbientVectorFn swirl = [](const Vec3& x, double) { return Vec3(std::cos(x[1]), x[0] * x[2], 0.5 + std::sin(x[0] - x[1])); };

Mat3 planar_identity() {
    Mat3 P = Mat3::Zero();
    P(0, 0) = P(1, 1) = 1.0;
    return P;
}

}  // namespace

TEST_CASE("gradient of a constant vanishes", "[calculus]") {
    for (const auto& spec : {surfaces::graph_surface(), surfaces::sphere_cap()}) {
        const GridGeometry geo = geometry(spec, 16, 0.3);
        const VectorField g = surface_gradient(ScalarField(geo.grid, 2.5), geo);
        for (int k = 0; k < geo.size(); ++k) CHECK(g[k].norm() == 0.0);
    }
}

TEST_CASE("gradient of X1 on the flat patch is e_x", "[calculus]") {
    const GridGeometry geo = geometry(test::flat_square(), 12);
    const VectorField g = surface_gradient(sample_scalar(geo, [](const Vec3& x, double) { return x[0]; }), geo);
    CHECK(test::max_error(g, geo, [](const MetricState&, int) { return Vec3(1, 0, 0); }) < 1e-12);
}

TEST_CASE("gradient of x3 on the unit sphere converges to e_z - x3 x", "[calculus]") {
    const FlowMapSpec spec = surfaces::sphere_cap(1.0, 0.2, 1.4);
    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const GridGeometry geo = geometry(spec, n);
        const VectorField g = surface_gradient(sample_scalar(geo, [](const Vec3& x, double) { return x[2]; }), geo);
        err.push_back(test::max_error(g, geo, [](const MetricState& m, int) { return Vec3(Vec3(0, 0, 1) - m.x[2] * m.x); }));
        h.push_back(geo.grid.h());
    }
    CHECK(err.back() < 1e-3);
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("surface gradients are tangent", "[calculus][property]") {
    for (const auto& e : surfaces::catalog()) {
        const FlowMapSpec spec = e.make({});
        const GridGeometry geo = geometry(spec, 12, 0.4);
        const VectorField g = surface_gradient(sample_scalar(geo, wavy), geo);
        INFO(e.name);
        for (int k = 0; k < geo.size(); ++k) CHECK(std::abs(geo[k].n.dot(g[k])) <= 1e-12);
    }
}

TEST_CASE("divergence examples", "[calculus]") {
    const GridGeometry flat = geometry(test::flat_square(), 12);
    const ScalarField c = surface_divergence(VectorField(flat.grid, Vec3(0.3, -1.0, 2.0)), flat);
    for (int k = 0; k < flat.size(); ++k) CHECK(std::abs(c[k]) < 1e-13);
    const ScalarField r = surface_divergence(sample_vector(flat, [](const Vec3& x, double) { return Vec3(x[0], x[1], 0.0); }), flat);
    for (int k = 0; k < flat.size(); ++k) CHECK(r[k] == Approx(2.0).margin(1e-12));

    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const GridGeometry geo = geometry(surfaces::sphere_cap(1.0, 0.2, 1.4), n);
        const ScalarField d = surface_divergence(normal_field(geo), geo);
        err.push_back(test::max_error(d, geo, [](const MetricState&, int) { return 2.0; }));
        h.push_back(geo.grid.h());
    }
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("radial field on the polar disk has divergence 2", "[calculus]") {
    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const GridGeometry geo = geometry(surfaces::flat_disk(), n);
        const ScalarField d = surface_divergence(sample_vector(geo, [](const Vec3& x, double) { return Vec3(x[0], x[1], 0.0); }), geo);
        err.push_back(test::max_error(d, geo, [](const MetricState&, int) { return 2.0; }));
        h.push_back(geo.grid.h());
    }
    CHECK(err.back() < 1e-2);
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("Laplace-Beltrami examples", "[calculus]") {
    const GridGeometry flat = geometry(test::flat_square(), 12);
    const ScalarField c = laplace_beltrami(ScalarField(flat.grid, 1.7), flat);
    for (int k = 0; k < flat.size(); ++k) CHECK(std::abs(c[k]) < 1e-12);
    const ScalarField q = laplace_beltrami(sample_scalar(flat, [](const Vec3& x, double) { return x[0] * x[0] + x[1] * x[1]; }), flat);
    CHECK(test::max_error(q, flat, [](const MetricState&, int) { return 4.0; }) < 1e-10);

    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const GridGeometry geo = geometry(surfaces::sphere_cap(1.0, 0.2, 1.4), n);
        const ScalarField L = laplace_beltrami(sample_scalar(geo, [](const Vec3& x, double) { return x[2]; }), geo);
        err.push_back(test::max_error(L, geo, [](const MetricState& m, int) { return -2.0 * m.x[2]; }));
        h.push_back(geo.grid.h());
    }
    CHECK(err.back() < 1e-2);
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("stretching tensor examples", "[calculus]") {
    const GridGeometry geo = geometry(test::flat_square(), 12);
    const TensorField rigid = stretching_tensor(VectorField(geo.grid, Vec3(1.0, -2.0, 0.5)), geo);
    for (int k = 0; k < geo.size(); ++k) CHECK(rigid[k].norm() == 0.0);
    const VectorField radial = sample_vector(geo, [](const Vec3& x, double) { return Vec3(x[0], x[1], 0.0); });
    const TensorField D = stretching_tensor(radial, geo);
    CHECK(test::max_error(D, geo, [](const MetricState&, int) { return planar_identity(); }) < 1e-12);
}

TEST_CASE("stress and dissipation of the planar radial field", "[calculus]") {
    const GridGeometry geo = geometry(test::flat_square(), 12);
    const ConstitutiveSet cs = constitutive::newtonian(1.0, 1.0);
    const VectorField radial = sample_vector(geo, [](const Vec3& x, double) { return Vec3(x[0], x[1], 0.0); });
    const TensorField S = stress_tensor(radial, ScalarField(geo.grid, 0.0), geo, cs);
    CHECK(test::max_error(S, geo, [](const MetricState&, int) { return Mat3(3.0 * planar_identity()); }) < 1e-11);
    const ScalarField d = dissipation_density(radial, geo, cs);
    CHECK(test::max_error(d, geo, [](const MetricState&, int) { return 6.0; }) < 1e-11);

    const TensorField rest = stress_tensor(VectorField(geo.grid, Vec3::Zero()), ScalarField(geo.grid, 0.0), geo, cs);
    for (int k = 0; k < geo.size(); ++k) CHECK(rest[k].norm() == 0.0);
    const ScalarField still = dissipation_density(VectorField(geo.grid, Vec3(0.2, 0.1, 0.0)), geo, cs);
    for (int k = 0; k < geo.size(); ++k) CHECK(std::abs(still[k]) < 1e-24);
}

TEST_CASE("stretching and stress are symmetric tangential tensors", "[calculus][property]") {
    const ConstitutiveSet cs = constitutive::power_law();
    for (const auto& spec : {surfaces::sphere_cap(), surfaces::graph_surface(), surfaces::swirling_disk()}) {
        const GridGeometry geo = geometry(spec, 12, 0.3);
        const VectorField v = sample_vector(geo, swirl);
        const TensorField D = stretching_tensor(v, geo);
        const TensorField S = stress_tensor(v, sample_scalar(geo, bumpy), geo, cs);
        INFO(spec.name);
        for (int k = 0; k < geo.size(); ++k) {
            CHECK((D[k] * geo[k].n).norm() <= 1e-12);
            CHECK((S[k] * geo[k].n).norm() <= 1e-12);
            CHECK((D[k] - D[k].transpose()).norm() <= 1e-12);
            CHECK((S[k] - S[k].transpose()).norm() <= 1e-12);
        }
    }
}

TEST_CASE("dissipation density is nonnegative for dissipative sets", "[calculus][property]") {
    const GridGeometry geo = geometry(surfaces::graph_surface(), 16, 0.2);
    const VectorField v = sample_vector(geo, swirl);
    for (const auto& e : constitutive::catalog()) {
        const ConstitutiveSet cs = e.make({});
        if (!cs.dissipative()) continue;
        const ScalarField d = dissipation_density(v, geo, cs);
        INFO(e.name);
        for (int k = 0; k < geo.size(); ++k) CHECK(d[k] >= 0.0);
    }
}

TEST_CASE("projection path and metric-rate path give the same strain energy", "[calculus][property]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    const double t = 0.4;
    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const GridGeometry geo = geometry(spec, n, t);
        const TensorField D = stretching_tensor(velocity_field(geo), geo);
        double e = 0.0;
        for (int k = 0; k < geo.size(); ++k) {
            const Mat2 a = geo[k].ginv * geo.metric_rate[static_cast<std::size_t>(k)];
            e = std::max(e, std::abs(ddot(D[k], D[k]) - 0.25 * (a * a).trace()));
        }
        err.push_back(e);
        h.push_back(geo.grid.h());
    }
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("expanding cap strain energy equals 2 (R'/R)^2", "[calculus]") {
    const GridGeometry geo = geometry(surfaces::expanding_sphere_cap(1.0, 1.0, 0.2, 1.4), 48, 0.5);
    const TensorField D = stretching_tensor(velocity_field(geo), geo);
    for (int k = 0; k < geo.size(); ++k) {
        const Mat2 a = geo[k].ginv * geo.metric_rate[static_cast<std::size_t>(k)];
        CHECK(0.25 * (a * a).trace() == Approx(2.0 / 2.25).epsilon(1e-12));
        CHECK(ddot(D[k], D[k]) == Approx(2.0 / 2.25).epsilon(1e-2));
    }
}

TEST_CASE("Leibniz rule holds to second order", "[calculus][property]") {
    const FlowMapSpec spec = surfaces::graph_surface();
    std::vector<double> err, h;
    for (int n : {16, 32, 64}) {
        const GridGeometry geo = geometry(spec, n, 0.3);
        const ScalarField f = sample_scalar(geo, wavy);
        const VectorField phi = sample_vector(geo, swirl);
        VectorField fphi = phi;
        for (int k = 0; k < geo.size(); ++k) fphi[k] = f[k] * phi[k];
        const ScalarField lhs = surface_divergence(fphi, geo);
        const VectorField gf = surface_gradient(f, geo);
        const ScalarField dphi = surface_divergence(phi, geo);
        err.push_back(test::max_error(lhs, geo, [&](const MetricState&, int k) { return gf[k].dot(phi[k]) + f[k] * dphi[k]; }));
        h.push_back(geo.grid.h());
    }
    CHECK(test::min_order(err, h) >= 1.9);
}

TEST_CASE("divergence of f P equals grad f + f H n", "[calculus][property]") {
    for (const auto& spec : {surfaces::graph_surface(), surfaces::sphere_cap(1.0, 0.2, 1.4)}) {
        std::vector<double> err, h;
        for (int n : {16, 32, 64}) {
            const GridGeometry geo = geometry(spec, n, 0.3);
            const ScalarField f = sample_scalar(geo, bumpy);
            const TensorField fP = make_field<Mat3>(geo.grid, [&](int k) { return Mat3(f[k] * geo[k].P); });
            const VectorField lhs = surface_divergence(fP, geo);
            const VectorField gf = surface_gradient(f, geo);
            err.push_back(test::max_error(lhs, geo, [&](const MetricState& m, int k) { return Vec3(gf[k] + f[k] * m.H * m.n); }));
            h.push_back(geo.grid.h());
        }
        INFO(spec.name);
        CHECK(test::min_order(err, h) >= 1.9);
    }
}

TEST_CASE("material derivative examples", "[calculus]") {
    const FlowMapSpec still = surfaces::sphere_cap();
    const Grid grid(still.domain, 12, 24);
    const GridGeometry geo = build_geometry(still, grid, 0.5);
    const ScalarField f = sample_scalar(geo, wavy);
    for (MaterialVariant var : {MaterialVariant::Full, MaterialVariant::Tangential, MaterialVariant::Normal}) {
        const ScalarField d = material_derivative({f, f, f}, 0.1, geo, var);
        for (int k = 0; k < geo.size(); ++k) CHECK(d[k] == 0.0);
    }

    const double dt = 0.05;
    const ScalarField d = material_derivative({ScalarField(grid, 0.5 - dt), ScalarField(grid, 0.5), ScalarField(grid, 0.5 + dt)}, dt, geo,
                                              MaterialVariant::Full);
    for (int k = 0; k < geo.size(); ++k) CHECK(d[k] == Approx(1.0).epsilon(1e-12));

    const FlowMapSpec cap = surfaces::expanding_sphere_cap();
    std::vector<ScalarField> levels;
    for (int s = -1; s <= 1; ++s) {
        const GridGeometry gs = build_geometry(cap, grid, 0.5 + s * dt);
        levels.push_back(sample_scalar(gs, [](const Vec3& x, double) { return x.squaredNorm(); }));
    }
    const ScalarField r = material_derivative(levels, dt, build_geometry(cap, grid, 0.5), MaterialVariant::Full);
    for (int k = 0; k < geo.size(); ++k) CHECK(r[k] == Approx(2.0 * 1.5 * 1.0).epsilon(1e-12));
}

TEST_CASE("material derivative needs an odd number of at least three levels", "[calculus]") {
    const FlowMapSpec spec = surfaces::flat_disk();
    const Grid grid(spec.domain, 8, 16);
    const GridGeometry geo = build_geometry(spec, grid, 0.0);
    const ScalarField f(grid, 1.0);
    CHECK_THROWS_AS(material_derivative({f, f}, 0.1, geo, MaterialVariant::Full), InsufficientTimeLevels);
    CHECK_THROWS_AS(material_derivative({f, f, f, f}, 0.1, geo, MaterialVariant::Full), InsufficientTimeLevels);
}

TEST_CASE("energy density derivatives match central differences", "[calculus][property]") {
    for (const auto& e : constitutive::catalog()) {
        const ConstitutiveSet cs = e.make({});
        INFO(e.name);
        for (const auto& ej : cs.e)
            for (double r : {0.1, 0.7, 2.0, 9.0}) {
                const double step = 1e-4;
                const double fd = (ej(r + step) - ej(r - step)) / (2 * step);
                CHECK(fd == Approx(ej.d(r)).epsilon(1e-7));
            }
    }
    for (const auto& p : constitutive::pressure_catalog()) {
        const PressureLaw law = p.make({});
        INFO(p.name);
        for (double rho : {0.5, 1.0, 2.3}) {
            const double step = 1e-4;
            CHECK((law.p(rho + step) - law.p(rho - step)) / (2 * step) == Approx(law.dp(rho)).epsilon(1e-7).margin(1e-12));
            CHECK((law.dp(rho + step) - law.dp(rho - step)) / (2 * step) == Approx(law.d2p(rho)).epsilon(1e-7).margin(1e-12));
            const double de = (law.effective(rho + step) - law.effective(rho - step)) / (2 * step);
            CHECK(de == Approx(law.sound_speed2(rho)).epsilon(1e-7).margin(1e-12));
        }
    }
}

TEST_CASE("dissipativity flag separates the catalog sets", "[calculus]") {
    CHECK(constitutive::newtonian().dissipative());
    CHECK(constitutive::shear_thickening().dissipative());
    CHECK(constitutive::power_law().dissipative());
    CHECK_FALSE(constitutive::anti_dissipative().dissipative());
    const PressureLaw q = laws::quadratic_pressure();
    CHECK(q.effective(1.7) == Approx(1.7 * 1.7));
}

TEST_CASE("seeded random fields are reproducible", "[calculus]") {
    Xoshiro256ss a(42), b(42), c(43);
    const AmbientScalarFn fa = random_smooth_scalar(a), fb = random_smooth_scalar(b), fc = random_smooth_scalar(c);
    const Vec3 x(0.3, -0.2, 0.5);
    CHECK(fa(x, 0.0) == fb(x, 0.0));
    CHECK(fa(x, 0.0) != fc(x, 0.0));
}
