#pragma once

#include "surfcalc/calculus/fields.hpp"
#include "surfcalc/calculus/material_derivative.hpp"
#include "surfcalc/calculus/operators.hpp"
#include "surfcalc/identities/report.hpp"
#include "surfcalc/quadrature/quadrature.hpp"

#include <string>
#include <vector>

namespace surfcalc {

/// Inputs of the energy-representation checks: the velocity is the one of the flow map.
struct IdentityScenario {
    FlowMapSpec spec;
    ConstitutiveSet cs = constitutive::newtonian();
    AmbientScalarFn sigma = [](const Vec3& x, double) { return 1.0 + 0.2 * x[0] - 0.1 * x[1] * x[2]; };
    AmbientScalarFn theta = [](const Vec3& x, double) { return 1.5 + 0.3 * std::sin(x[0] + 0.5 * x[1]) * std::cos(x[2]); };
    AmbientScalarFn C = [](const Vec3& x, double) { return std::exp(-(x - Vec3(0.2, -0.1, 0.3)).squaredNorm()); };
};

/// Ambient gradient of a closed-form field by fourth-order differences.
inline Vec3 ambient_gradient(const AmbientScalarFn& f, const Vec3& x, double t, double step = 1e-3) {
    Vec3 g;
    for (int c = 0; c < 3; ++c)
        g[c] = central4([&](double s) {
            Vec3 y = x;
            y[c] = s;
            return f(y, t);
        }, x[c], step);
    return g;
}

/// Surface integrals of the six energy densities computed two ways at time t: from ambient-side
/// operators on the surface (left) and from the metric, its rate and parameter derivatives
/// (right). `dt` is the time step of the central difference of sqrt(G).
inline std::vector<CheckRow> check_energy_representations(const IdentityScenario& sc, int n1, int n2, double t, double dt,
                                                          InteriorRule interior = InteriorRule::Trapezoid) {
    const Grid grid(sc.spec.domain, n1, n2);
    const GridGeometry geo = build_geometry(sc.spec, grid, t);
    const QuadratureRule rule = make_rule(grid, interior);
    const int n = grid.size();
    const double h = grid.h();

    const VectorField v = velocity_field(geo);
    const TensorField gv = surface_gradient(v, geo);
    const ScalarField sigma = sample_scalar(geo, sc.sigma);
    const ScalarField theta = sample_scalar(geo, sc.theta);
    const ScalarField conc = sample_scalar(geo, sc.C);
    const ScalarField dtheta[2] = {param_derivative(theta, grid, 0), param_derivative(theta, grid, 1)};
    const ScalarField dconc[2] = {param_derivative(conc, grid, 0), param_derivative(conc, grid, 1)};

    auto sqrtG_at = [&](int k, double s) {
        const auto [i, j] = std::pair{k / grid.n(1), k % grid.n(1)};
        const auto g = tangents_at(sc.spec, grid.node(i, j), s);
        return g[0].cross(g[1]).norm();
    };

    ScalarField l[6], r[6];
    for (auto& f : l) f = ScalarField(grid, 0.0);
    for (auto& f : r) f = ScalarField(grid, 0.0);
    ScalarField rate_sqrtG(grid, 0.0);  // already carries the area element

    for (int k = 0; k < n; ++k) {
        const MetricState& m = geo[k];
        const Mat2& gd = geo.metric_rate[static_cast<std::size_t>(k)];
        const Mat3 D = m.P * sym(gv[k]) * m.P;
        const double divv = gv[k].trace();
        const double half_trace = 0.5 * (m.ginv * gd).trace();
        const Mat2 a = m.ginv * gd;

        l[0][k] = divv;
        rate_sqrtG[k] = (sqrtG_at(k, t + dt) - sqrtG_at(k, t - dt)) / (2.0 * dt);

        l[1][k] = divv * sigma[k];
        r[1][k] = half_trace * sigma[k];

        l[2][k] = 0.5 * sc.cs.e1()(ddot(D, D));
        r[2][k] = 0.5 * sc.cs.e1()(0.25 * (a * a).trace());

        l[3][k] = 0.5 * sc.cs.e2()(divv * divv);
        r[3][k] = 0.5 * sc.cs.e2()(half_trace * half_trace);

        const Vec3 gth = m.P * ambient_gradient(sc.theta, m.x, t);
        const Vec2 pth(dtheta[0][k], dtheta[1][k]);
        l[4][k] = 0.5 * sc.cs.e3()(gth.squaredNorm());
        r[4][k] = 0.5 * sc.cs.e3()(pth.dot(m.ginv * pth));

        const Vec3 gc = m.P * ambient_gradient(sc.C, m.x, t);
        const Vec2 pc(dconc[0][k], dconc[1][k]);
        l[5][k] = 0.5 * sc.cs.e4()(gc.squaredNorm());
        r[5][k] = 0.5 * sc.cs.e4()(pc.dot(m.ginv * pc));
    }

    static const char* names[6] = {"energy.div-velocity", "energy.pressure-work", "energy.shear",
                                   "energy.dilatation",   "energy.heat",          "energy.diffusion"};
    std::vector<CheckRow> rows;
    rows.push_back(make_row(names[0], h, dt, surface_integral(l[0], geo, rule), parameter_integral(rate_sqrtG, grid, rule)));
    for (int q = 1; q < 6; ++q) rows.push_back(make_row(names[q], h, 0.0, surface_integral(l[q], geo, rule), surface_integral(r[q], geo, rule)));
    return rows;
}

/// The three terms of the divergence theorem on a surface with boundary.
struct DivergenceTerms {
    double divergence = 0.0;  // integral of div_G phi
    double curvature = 0.0;   // integral of H (n . phi)
    double boundary = 0.0;    // line integral of nu . phi
};

inline DivergenceTerms divergence_terms(const AmbientVectorFn& phi, const GridGeometry& geo, const QuadratureRule& rule) {
    const VectorField f = sample_vector(geo, phi);
    const ScalarField div = surface_divergence(f, geo);
    ScalarField hn(geo.grid, 0.0);
    for (int k = 0; k < geo.size(); ++k) hn[k] = geo[k].H * geo[k].n.dot(f[k]);
    const BoundaryField b = sample_boundary(geo, [&](const BoundaryNodeGeometry& bn) { return bn.nu.dot(phi(geo[bn.node].x, geo.t)); });
    return {surface_integral(div, geo, rule), surface_integral(hn, geo, rule), boundary_integral(b, geo)};
}

/// lhs = integral of div_G phi, rhs = -integral of H (n . phi) + line integral of nu . phi.
inline CheckRow check_divergence_theorem(const AmbientVectorFn& phi, const GridGeometry& geo, const QuadratureRule& rule,
                                         const std::string& name = "divergence-theorem") {
    const DivergenceTerms d = divergence_terms(phi, geo, rule);
    return make_row(name, geo.grid.h(), 0.0, d.divergence, -d.curvature + d.boundary);
}

inline CheckRow check_divergence_theorem(const AmbientVectorFn& phi, const GridGeometry& geo) {
    return check_divergence_theorem(phi, geo, make_rule(geo.grid));
}

/// lhs = integral of f d_j^G g, rhs = -integral of (d_j^G f + H n_j f) g + line integral of nu_j f g.
inline CheckRow check_integration_by_parts(const AmbientScalarFn& f, const AmbientScalarFn& g, int j, const GridGeometry& geo,
                                           const QuadratureRule& rule, const std::string& name = "integration-by-parts") {
    const ScalarField fs = sample_scalar(geo, f);
    const ScalarField gs = sample_scalar(geo, g);
    const VectorField gf = surface_gradient(fs, geo);
    const VectorField gg = surface_gradient(gs, geo);
    ScalarField left(geo.grid, 0.0), right(geo.grid, 0.0);
    for (int k = 0; k < geo.size(); ++k) {
        left[k] = fs[k] * gg[k][j];
        right[k] = (gf[k][j] + geo[k].H * geo[k].n[j] * fs[k]) * gs[k];
    }
    const BoundaryField b = sample_boundary(geo, [&](const BoundaryNodeGeometry& bn) { return bn.nu[j] * fs[bn.node] * gs[bn.node]; });
    return make_row(name, geo.grid.h(), 0.0, surface_integral(left, geo, rule), -surface_integral(right, geo, rule) + boundary_integral(b, geo));
}

/// lhs = d/dt of the integral of f (central difference across t - dt, t + dt), rhs = integral of
/// D_t f + (div_G v) f at t. f is the Lagrangian field f(x(X, t), t).
inline CheckRow check_transport_theorem(const ParamScalarFn& f, const FlowMapSpec& spec, int n1, int n2, double t, double dt,
                                        InteriorRule interior = InteriorRule::Trapezoid, const std::string& name = "transport-theorem") {
    const Grid grid(spec.domain, n1, n2);
    const QuadratureRule rule = make_rule(grid, interior);
    std::vector<ScalarField> levels;
    std::vector<double> integrals;
    GridGeometry centre;
    for (int s = -1; s <= 1; ++s) {
        const double ts = t + s * dt;
        GridGeometry geo = build_geometry(spec, grid, ts);
        ScalarField fs = make_field<double>(grid, [&](int k) { return f(grid.node(k / grid.n(1), k % grid.n(1)), ts); });
        integrals.push_back(surface_integral(fs, geo, rule));
        levels.push_back(std::move(fs));
        if (s == 0) centre = std::move(geo);
    }
    const ScalarField Dt = material_derivative(levels, dt, centre, MaterialVariant::Full);
    const ScalarField divv = surface_divergence(velocity_field(centre), centre);
    ScalarField integrand(grid, 0.0);
    for (int k = 0; k < grid.size(); ++k) integrand[k] = Dt[k] + divv[k] * levels[1][k];
    return make_row(name, grid.h(), dt, (integrals[2] - integrals[0]) / (2.0 * dt), surface_integral(integrand, centre, rule));
}

}  // namespace surfcalc
