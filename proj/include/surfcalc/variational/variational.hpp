#pragma once

#include "surfcalc/calculus/fields.hpp"
#include "surfcalc/calculus/operators.hpp"
#include "surfcalc/calculus/reference.hpp"
#include "surfcalc/errors.hpp"
#include "surfcalc/identities/report.hpp"
#include "surfcalc/quadrature/quadrature.hpp"

#include <limits>
#include <vector>

namespace surfcalc {

enum class Functional {
    Dissipation,       // E_D[v]
    Work,              // E_W[v]
    ThermalDiffusion,  // E_TD[theta]
    GeneralDiffusion   // E_GD[C]
};

inline std::string to_string(Functional f) {
    switch (f) {
        case Functional::Dissipation: return "dissipation";
        case Functional::Work: return "work";
        case Functional::ThermalDiffusion: return "thermal-diffusion";
        case Functional::GeneralDiffusion: return "general-diffusion";
    }
    return "?";
}

inline bool acts_on_velocity(Functional f) { return f == Functional::Dissipation || f == Functional::Work; }

/// Fields the functionals read, sampled on one grid at one time.
struct VariationalState {
    VectorField v;
    ScalarField sigma;
    ScalarField theta;
    ScalarField C;
    ScalarField rho;
    VectorField F;
};

inline VariationalState sample_state(const GridGeometry& geo, const AmbientVectorFn& v, const AmbientScalarFn& sigma,
                                     const AmbientScalarFn& theta, const AmbientScalarFn& C, const AmbientScalarFn& rho,
                                     const AmbientVectorFn& F) {
    return {sample_vector(geo, v), sample_scalar(geo, sigma), sample_scalar(geo, theta), sample_scalar(geo, C), sample_scalar(geo, rho),
            sample_vector(geo, F)};
}

enum class DirectionKind { Velocity, Scalar, FlowMap };

/// A variation direction: phi (velocity), psi (scalar) or z (flow map).
struct VariationDirection {
    DirectionKind kind = DirectionKind::Velocity;
    VectorField vec;
    ScalarField scalar;
    bool tangential = false;
    bool compact = false;

    /// Throws DomainError when a declared flag does not hold.
    void validate(const GridGeometry& geo, double tol = 1e-12) const {
        const Grid& g = geo.grid;
        for (int i = 0; i < g.n(0); ++i)
            for (int j = 0; j < g.n(1); ++j) {
                const int k = g.index(i, j);
                if (compact && g.is_boundary_node(i, j)) {
                    const double m = kind == DirectionKind::Scalar ? std::abs(scalar[k]) : vec[k].norm();
                    if (m != 0.0) throw DomainError("compact-support direction does not vanish on the boundary");
                }
                if (tangential && kind != DirectionKind::Scalar && std::abs(geo[k].n.dot(vec[k])) > tol)
                    throw DomainError("tangential direction has a normal component");
            }
    }
};

/// Seeded direction supported inside the domain (see interior_bump); tangential vectors are
/// projected with P.
inline VariationDirection random_direction(DirectionKind kind, const GridGeometry& geo, Xoshiro256ss& rng, bool tangential,
                                           double support = 0.75) {
    const ParamScalarFn bump = interior_bump(geo.grid.domain(), support);
    const Grid& g = geo.grid;
    VariationDirection d;
    d.kind = kind;
    d.tangential = tangential && kind != DirectionKind::Scalar;
    d.compact = true;
    if (kind == DirectionKind::Scalar) {
        const AmbientScalarFn f = random_smooth_scalar(rng);
        d.scalar = make_field<double>(g, [&](int k) { return bump(g.node(k / g.n(1), k % g.n(1)), geo.t) * f(geo[k].x, geo.t); });
        d.vec = VectorField(g, Vec3::Zero());
    } else {
        const AmbientVectorFn f = random_smooth_vector(rng);
        d.vec = make_field<Vec3>(g, [&](int k) {
            Vec3 w = bump(g.node(k / g.n(1), k % g.n(1)), geo.t) * f(geo[k].x, geo.t);
            if (d.tangential) w = geo[k].P * w;
            return w;
        });
        d.scalar = ScalarField(g, 0.0);
    }
    return d;
}

/// The functionals at epsilon = 0, by quadrature of grid-stencil integrands.
inline double energy_functional(Functional which, const VariationalState& s, const GridGeometry& geo, const ConstitutiveSet& cs,
                                const QuadratureRule& rule, StencilOrder order = StencilOrder::Second) {
    ScalarField integrand(geo.grid, 0.0);
    switch (which) {
        case Functional::Dissipation: {
            const TensorField gv = surface_gradient(s.v, geo, order);
            for (int k = 0; k < geo.size(); ++k) {
                const Mat3 D = geo[k].P * sym(gv[k]) * geo[k].P;
                const double d = gv[k].trace();
                integrand[k] = -0.5 * (cs.e1()(ddot(D, D)) + cs.e2()(d * d));
            }
            break;
        }
        case Functional::Work: {
            const ScalarField divv = surface_divergence(s.v, geo, order);
            for (int k = 0; k < geo.size(); ++k) integrand[k] = divv[k] * s.sigma[k] + s.rho[k] * s.F[k].dot(s.v[k]);
            break;
        }
        case Functional::ThermalDiffusion:
        case Functional::GeneralDiffusion: {
            const bool heat = which == Functional::ThermalDiffusion;
            const VectorField g = surface_gradient(heat ? s.theta : s.C, geo, order);
            const EnergyDensity& e = heat ? cs.e3() : cs.e4();
            for (int k = 0; k < geo.size(); ++k) integrand[k] = -0.5 * e(g[k].squaredNorm());
            break;
        }
    }
    return surface_integral(integrand, geo, rule);
}

inline double energy_functional(Functional which, const VariationalState& s, const GridGeometry& geo, const ConstitutiveSet& cs) {
    return energy_functional(which, s, geo, cs, make_rule(geo.grid));
}

/// State shifted by eps along the direction (the field the functional varies).
inline VariationalState perturbed(Functional which, const VariationalState& s, const VariationDirection& d, double eps) {
    VariationalState out = s;
    switch (which) {
        case Functional::Dissipation:
        case Functional::Work:
            for (int k = 0; k < out.v.size(); ++k) out.v[k] += eps * d.vec[k];
            break;
        case Functional::ThermalDiffusion:
            for (int k = 0; k < out.theta.size(); ++k) out.theta[k] += eps * d.scalar[k];
            break;
        case Functional::GeneralDiffusion:
            for (int k = 0; k < out.C.size(); ++k) out.C[k] += eps * d.scalar[k];
            break;
    }
    return out;
}

struct GateauxResult {
    double value = 0.0;  // Richardson-extrapolated derivative
    double error = 0.0;  // difference of the last two extrapolants (or raw differences)
    std::vector<double> raw;
};

inline const std::vector<double>& default_eps_ladder() {
    static const std::vector<double> ladder = {1e-2, 1e-3, 1e-4};
    return ladder;
}

/// d/d eps at 0 of f by central differences on a decreasing eps ladder with Richardson
/// elimination of the eps^2 term. Throws StepTooSmall when the raw differences stop settling
/// and their change exceeds the round-off floor of the last step.
template <class Fn>
GateauxResult gateaux_numeric(Fn&& f, const std::vector<double>& eps_list = default_eps_ladder()) {
    if (eps_list.empty()) throw DomainError("empty eps ladder");
    GateauxResult r;
    double fscale = 0.0;
    for (double eps : eps_list) {
        const double fp = f(eps);
        const double fm = f(-eps);
        fscale = std::max({fscale, std::abs(fp), std::abs(fm)});
        r.raw.push_back((fp - fm) / (2.0 * eps));
    }
    std::vector<double> rich;
    for (std::size_t q = 1; q < r.raw.size(); ++q) {
        const double ratio = eps_list[q - 1] / eps_list[q];
        rich.push_back(r.raw[q] + (r.raw[q] - r.raw[q - 1]) / (ratio * ratio - 1.0));
    }
    if (rich.empty()) {
        r.value = r.raw.back();
        r.error = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.value = rich.back();
    r.error = rich.size() >= 2 ? std::abs(rich.back() - rich[rich.size() - 2]) : std::abs(r.raw.back() - r.raw[r.raw.size() - 2]);
    if (r.raw.size() >= 3) {
        const std::size_t m = r.raw.size();
        const double d_last = std::abs(r.raw[m - 1] - r.raw[m - 2]);
        const double d_prev = std::abs(r.raw[m - 2] - r.raw[m - 3]);
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(fscale, 1e-300) / eps_list.back();
        if (d_last > d_prev && d_last > floor) throw StepTooSmall("central differences diverge on the eps ladder; cancellation dominates");
    }
    return r;
}

inline GateauxResult gateaux_numeric(Functional which, const VariationalState& s, const VariationDirection& d, const GridGeometry& geo,
                                     const ConstitutiveSet& cs, const QuadratureRule& rule,
                                     const std::vector<double>& eps_list = default_eps_ladder(), StencilOrder order = StencilOrder::Second) {
    return gateaux_numeric([&](double eps) { return energy_functional(which, perturbed(which, s, d, eps), geo, cs, rule, order); },
                           eps_list);
}

/// Closed-form force whose pairing with a direction is the first variation of the functional.
/// Velocity functionals give a vector field (in .vec); scalar functionals a scalar (in .scalar).
struct ForceField {
    VectorField vec;
    ScalarField scalar;
};

inline ForceField variational_force(Functional which, const VariationalState& s, const GridGeometry& geo, const ConstitutiveSet& cs,
                                    bool tangential, StencilOrder order = StencilOrder::Second) {
    ForceField out;
    const Grid& g = geo.grid;
    switch (which) {
        case Functional::Dissipation: {
            const TensorField gv = surface_gradient(s.v, geo, order);
            TensorField viscous(g, Mat3::Zero());
            for (int k = 0; k < geo.size(); ++k) {
                const Mat3 D = geo[k].P * sym(gv[k]) * geo[k].P;
                const double d = gv[k].trace();
                viscous[k] = cs.e1().d(ddot(D, D)) * D + cs.e2().d(d * d) * d * geo[k].P;
            }
            out.vec = surface_divergence(viscous, geo, order);
            break;
        }
        case Functional::Work: {
            TensorField tension(g, Mat3::Zero());
            for (int k = 0; k < geo.size(); ++k) tension[k] = -s.sigma[k] * geo[k].P;
            out.vec = surface_divergence(tension, geo, order);
            for (int k = 0; k < geo.size(); ++k) out.vec[k] += s.rho[k] * s.F[k];
            break;
        }
        case Functional::ThermalDiffusion:
        case Functional::GeneralDiffusion: {
            const bool heat = which == Functional::ThermalDiffusion;
            const ScalarField& f = heat ? s.theta : s.C;
            const EnergyDensity& e = heat ? cs.e3() : cs.e4();
            const VectorField flux = map_field<Vec3>(surface_gradient(f, geo, order), [&](const Vec3& q) { return Vec3(e.d(q.squaredNorm()) * q); });
            out.scalar = surface_divergence(flux, geo, order);
            break;
        }
    }
    if (acts_on_velocity(which)) {
        if (tangential)
            for (int k = 0; k < geo.size(); ++k) out.vec[k] = geo[k].P * out.vec[k];
        out.scalar = ScalarField(g, 0.0);
    } else {
        out.vec = VectorField(g, Vec3::Zero());
    }
    return out;
}

/// Surface integral of force . direction, together with the integral of |force| |direction|.
inline std::pair<double, double> force_pairing(const ForceField& f, const VariationDirection& d, const GridGeometry& geo,
                                               const QuadratureRule& rule) {
    ScalarField p(geo.grid, 0.0), m(geo.grid, 0.0);
    for (int k = 0; k < geo.size(); ++k) {
        if (d.kind == DirectionKind::Scalar) {
            p[k] = f.scalar[k] * d.scalar[k];
            m[k] = std::abs(p[k]);
        } else {
            p[k] = f.vec[k].dot(d.vec[k]);
            m[k] = f.vec[k].norm() * d.vec[k].norm();
        }
    }
    return {surface_integral(p, geo, rule), surface_integral(m, geo, rule)};
}

/// Relative pairing mismatch; the scale is the larger of the two sides, floored at 1% of the
/// magnitude integral so that nearly orthogonal directions do not divide by ~0.
struct PairingCheck {
    double gateaux = 0.0;
    double gateaux_error = 0.0;
    double pairing = 0.0;
    double scale = 0.0;
    double relative = 0.0;
};

inline PairingCheck check_pairing(Functional which, const VariationalState& s, const VariationDirection& d, const GridGeometry& geo,
                                  const ConstitutiveSet& cs, bool tangential, const QuadratureRule& rule,
                                  StencilOrder order = StencilOrder::Second, const std::vector<double>& eps_list = default_eps_ladder()) {
    const GateauxResult gr = gateaux_numeric(which, s, d, geo, cs, rule, eps_list, order);
    const auto [pair, mag] = force_pairing(variational_force(which, s, geo, cs, tangential, order), d, geo, rule);
    PairingCheck c;
    c.gateaux = gr.value;
    c.gateaux_error = gr.error;
    c.pairing = pair;
    c.scale = std::max({std::abs(gr.value), std::abs(pair), 1e-2 * mag, 1e-300});
    c.relative = std::abs(gr.value - pair) / c.scale;
    return c;
}

// ---------------------------------------------------------------------------------------
// Flow-map variations

/// rho(x(X, t), t) = rho0(Phi(X)) sqrt(G(X, 0)) / sqrt(G(X, t)).
inline ScalarField density_transport(const AmbientScalarFn& rho0, const FlowMapSpec& spec, const Grid& grid, double t) {
    return make_field<double>(grid, [&](int k) {
        const Vec2 X = grid.node(k / grid.n(1), k % grid.n(1));
        const auto g0 = tangents_at(spec, X, 0.0);
        const auto gt = tangents_at(spec, X, t);
        const double G0 = g0[0].cross(g0[1]).squaredNorm();
        const double Gt = gt[0].cross(gt[1]).squaredNorm();
        if (!(Gt > 0.0) || !(G0 > 0.0)) throw SingularMetric("vanishing area element in density transport");
        return rho0(spec.reference(X), 0.0) * std::sqrt(G0) / std::sqrt(Gt);
    }, "mass/area");
}

inline std::vector<ScalarField> density_transport(const AmbientScalarFn& rho0, const FlowMapSpec& spec, const Grid& grid,
                                                  const std::vector<double>& times) {
    std::vector<ScalarField> out;
    for (double t : times) out.push_back(density_transport(rho0, spec, grid, t));
    return out;
}

/// lhs = integral of div_G z at time t, rhs = integral over U of d/d eps sqrt(G^eps) for the family
/// x + eps z, the eps derivative taken on the ladder.
inline CheckRow check_area_variation(const FlowMapSpec& spec, const ParamVectorFn& z, int n1, int n2, double t,
                                     const std::vector<double>& eps_list = default_eps_ladder()) {
    const Grid grid(spec.domain, n1, n2);
    const GridGeometry geo = build_geometry(spec, grid, t);
    const QuadratureRule rule = make_rule(grid);
    const Reference ref(spec);
    const VectorField zs = make_field<Vec3>(grid, [&](int k) { return z(grid.node(k / grid.n(1), k % grid.n(1)), t); });
    const ScalarField divz = surface_divergence(zs, geo);
    std::vector<std::array<Vec3, 2>> dz(static_cast<std::size_t>(grid.size()));
    for (int k = 0; k < grid.size(); ++k) {
        const Vec2 X = grid.node(k / grid.n(1), k % grid.n(1));
        dz[static_cast<std::size_t>(k)] = {ref.partial(z, X, t, 0), ref.partial(z, X, t, 1)};
    }
    auto area = [&](double eps) {
        ScalarField a(grid, 0.0);
        for (int k = 0; k < grid.size(); ++k) {
            const auto& d = dz[static_cast<std::size_t>(k)];
            a[k] = (geo[k].g1 + eps * d[0]).cross(geo[k].g2 + eps * d[1]).norm();
        }
        return parameter_integral(a, grid, rule);
    };
    const GateauxResult gr = gateaux_numeric(area, eps_list);
    return make_row("area-variation", grid.h(), 0.0, surface_integral(divz, geo, rule), gr.value);
}

enum class Action {
    Kinetic,    // Act = -int int rho |v|^2 / 2
    Barotropic  // A_B = -int int (rho |v|^2 / 2 - p(rho))
};

/// Flow-map family x + eps z on [0, horizon]; z must vanish at t = 0 and t = horizon.
struct ActionFamily {
    FlowMapSpec spec;
    ParamVectorFn z;
    AmbientScalarFn rho0 = [](const Vec3&, double) { return 1.0; };
    PressureLaw pressure = laws::quadratic_pressure();
    double horizon = 1.0;
};

/// Compares d/d eps of the discretized action (central difference at `eps`) with the space-time
/// quadrature of the force pairing. Space: grid quadrature; time: trapezoid with `steps` intervals.
/// Barotropic actions add grad(pe) + pe H n to rho D_t v, pe = rho p' - p.
inline CheckRow check_action_variation(const ActionFamily& fam, Action which, int n1, int n2, int steps, double eps) {
    const Grid grid(fam.spec.domain, n1, n2);
    const QuadratureRule rule = make_rule(grid);
    const Reference ref(fam.spec);
    const double dt = fam.horizon / steps;
    const int n = grid.size();
    const bool baro = which == Action::Barotropic;

    std::vector<double> mass0(static_cast<std::size_t>(n));  // rho0 sqrt(G(X, 0))
    for (int k = 0; k < n; ++k) {
        const Vec2 X = grid.node(k / grid.n(1), k % grid.n(1));
        const auto g0 = tangents_at(fam.spec, X, 0.0);
        mass0[static_cast<std::size_t>(k)] = fam.rho0(fam.spec.reference(X), 0.0) * g0[0].cross(g0[1]).norm();
    }

    std::vector<double> a_plus, a_minus, pairing;
    for (int q = 0; q <= steps; ++q) {
        const double t = q * dt;
        const GridGeometry geo = build_geometry(fam.spec, grid, t);
        ScalarField lp(grid, 0.0), lm(grid, 0.0), pe(grid, 0.0), rho(grid, 0.0);
        VectorField zs(grid, Vec3::Zero());
        for (int k = 0; k < n; ++k) {
            const Vec2 X = grid.node(k / grid.n(1), k % grid.n(1));
            const double m0 = mass0[static_cast<std::size_t>(k)];
            const Vec3 zt = ref.rate(fam.z, X, t);
            const Vec3 z1 = ref.partial(fam.z, X, t, 0);
            const Vec3 z2 = ref.partial(fam.z, X, t, 1);
            const Vec3& v = geo.velocity[static_cast<std::size_t>(k)];
            for (int sgn : {1, -1}) {
                const double e = sgn * eps;
                double val = -0.5 * m0 * (v + e * zt).squaredNorm();
                if (baro) {
                    const double sg = (geo[k].g1 + e * z1).cross(geo[k].g2 + e * z2).norm();
                    val += fam.pressure.p(m0 / sg) * sg;
                }
                (sgn > 0 ? lp : lm)[k] = val;
            }
            rho[k] = m0 / geo[k].sqrtG;
            pe[k] = fam.pressure.effective(rho[k]);
            zs[k] = fam.z(X, t);
        }
        a_plus.push_back(parameter_integral(lp, grid, rule));
        a_minus.push_back(parameter_integral(lm, grid, rule));

        ScalarField f(grid, 0.0);
        const VectorField gpe = baro ? surface_gradient(pe, geo) : VectorField(grid, Vec3::Zero());
        for (int k = 0; k < n; ++k) {
            const Vec2 X = grid.node(k / grid.n(1), k % grid.n(1));
            Vec3 force = rho[k] * acceleration_at(fam.spec, X, t);
            if (baro) force += gpe[k] + pe[k] * geo[k].H * geo[k].n;
            f[k] = force.dot(zs[k]);
        }
        pairing.push_back(surface_integral(f, geo, rule));
    }
    auto trapezoid = [&](const std::vector<double>& y) {
        std::vector<double> terms(y.size());
        for (std::size_t q = 0; q < y.size(); ++q) terms[q] = (q == 0 || q + 1 == y.size() ? 0.5 : 1.0) * dt * y[q];
        return pairwise_sum(terms);
    };
    const double lhs = (trapezoid(a_plus) - trapezoid(a_minus)) / (2.0 * eps);
    return make_row(baro ? "action.barotropic" : "action.kinetic", grid.h(), dt, lhs, trapezoid(pairing));
}

}  // namespace surfcalc
