#pragma once

#include "surfcalc/calculus/fields.hpp"
#include "surfcalc/calculus/material_derivative.hpp"
#include "surfcalc/calculus/reference.hpp"
#include "surfcalc/solver/barotropic.hpp"
#include "surfcalc/solver/state.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace surfcalc {

/// Closed-form state carried by a flow map. The fluid moves with the surface parametrization
/// (v is the flow-map velocity), the density keeps rho sqrtG fixed along each X, and the other
/// fields are given in the material coordinates X. Unless `tension` or `temperature` is set,
/// they follow the ideal closure e = exp(s / c_v) rho^k, theta = e / c_v, sigma = k rho e,
/// which satisfies the Gibbs relation de = theta ds - sigma d(1/rho).
struct ManufacturedFlow {
    std::string name;
    FlowMapSpec spec;
    AmbientScalarFn rho0 = [](const Vec3&, double) { return 1.0; };
    ParamScalarFn entropy = [](const Vec2&, double) { return 0.0; };
    ParamScalarFn concentration = [](const Vec2&, double) { return 0.0; };
    ParamScalarFn tension;      // empty: k rho e
    ParamScalarFn temperature;  // empty: e / c_v
    ParamVectorFn force;        // empty: zero
    double heat_capacity = 1.0;
    double exponent = 0.5;

    bool gibbs() const { return !tension && !temperature; }

    ParamScalarFn density() const {
        return [spec = spec, rho0 = rho0](const Vec2& X, double t) {
            const auto g0 = tangents_at(spec, X, 0.0);
            const auto gt = tangents_at(spec, X, t);
            return rho0(spec.reference(X), 0.0) * g0[0].cross(g0[1]).norm() / gt[0].cross(gt[1]).norm();
        };
    }

    ParamVectorFn velocity() const {
        return [spec = spec](const Vec2& X, double t) { return velocity_at(spec, X, t); };
    }

    ParamScalarFn internal_energy() const {
        return [rho = density(), s = entropy, cv = heat_capacity, k = exponent](const Vec2& X, double t) {
            return std::exp(s(X, t) / cv) * std::pow(rho(X, t), k);
        };
    }

    ParamScalarFn theta() const {
        if (temperature) return temperature;
        return [e = internal_energy(), cv = heat_capacity](const Vec2& X, double t) { return e(X, t) / cv; };
    }

    ParamScalarFn sigma() const {
        if (tension) return tension;
        return [e = internal_energy(), rho = density(), k = exponent](const Vec2& X, double t) { return k * rho(X, t) * e(X, t); };
    }

    ParamVectorFn exterior_force() const {
        if (force) return force;
        return [](const Vec2&, double) { return Vec3::Zero().eval(); };
    }

    /// All fields on the nodes of geo at time geo.t.
    FluidState sample(const GridGeometry& geo) const {
        const Grid& g = geo.grid;
        FluidState st = FluidState::zeros(g, geo.t);
        const auto rho = density();
        const auto e = internal_energy();
        const auto th = theta();
        const auto sg = sigma();
        const auto F = exterior_force();
        for (int k = 0; k < g.size(); ++k) {
            const Vec2 X = g.node(k / g.n(1), k % g.n(1));
            const double t = geo.t;
            st.rho[k] = rho(X, t);
            st.v[k] = geo.velocity[static_cast<std::size_t>(k)];
            st.e[k] = e(X, t);
            st.theta[k] = th(X, t);
            st.sigma[k] = sg(X, t);
            st.C[k] = concentration(X, t);
            st.s[k] = entropy(X, t);
            st.F[k] = F(X, t);
        }
        return st;
    }
};

/// F = D_t v - div_G S / rho: the force for which the momentum equation holds exactly.
inline ParamVectorFn balancing_force(const ManufacturedFlow& flow, const ConstitutiveSet& cs) {
    const Reference ref(flow.spec);
    return [ref, v = flow.velocity(), rho = flow.density(), S = ref.stress(flow.velocity(), flow.sigma(), cs)](const Vec2& X, double t) {
        return Vec3(ref.rate(v, X, t) - ref.div(S, X, t) / rho(X, t));
    };
}

/// Snapshots at t + (q - count/2) dt, q = 0..count-1, and the geometry at the middle time.
struct ManufacturedLevels {
    double t = 0.0;
    double dt = 0.0;
    std::vector<FluidState> states;
    GridGeometry geo;
};

inline ManufacturedLevels sample_levels(const ManufacturedFlow& flow, const Grid& grid, double t, double dt, int count = 3) {
    if (count < 3 || count % 2 == 0) throw InsufficientTimeLevels("manufactured levels need an odd count of at least 3");
    ManufacturedLevels out;
    out.t = t;
    out.dt = dt;
    for (int q = 0; q < count; ++q) {
        const double tq = t + (q - count / 2) * dt;
        const GridGeometry geo = build_geometry(flow.spec, grid, tq);
        out.states.push_back(flow.sample(geo));
        if (q == count / 2) out.geo = geo;
    }
    return out;
}

/// Exact right-hand-side defects of the material-form system for the closed-form state:
///   mass = D_t rho + (div v) rho
///   momentum = rho D_t v - div S - rho F
///   energy = rho D_t e + (div v) sigma - div q_theta - e_D
///   concentration = D_t C + (div v) C - div q_C
/// evaluated pointwise with the reference evaluator.
struct ManufacturedSources {
    ScalarField mass;
    VectorField momentum;
    ScalarField energy;
    ScalarField concentration;
};

inline ManufacturedSources manufactured_sources(const ManufacturedFlow& flow, const ConstitutiveSet& cs, const Grid& grid, double t) {
    const Reference ref(flow.spec);
    const auto rho = flow.density();
    const auto v = flow.velocity();
    const auto e = flow.internal_energy();
    const auto th = flow.theta();
    const auto sg = flow.sigma();
    const auto F = flow.exterior_force();
    const auto divv = ref.divergence(v);
    const auto S = ref.stress(v, sg, cs);
    const auto qt = ref.flux(th, cs.e3());
    const auto qc = ref.flux(flow.concentration, cs.e4());
    const auto diss = ref.dissipation(v, cs);

    ManufacturedSources src;
    src.mass = ScalarField(grid, 0.0);
    src.momentum = VectorField(grid, Vec3::Zero());
    src.energy = ScalarField(grid, 0.0);
    src.concentration = ScalarField(grid, 0.0);
    for (int k = 0; k < grid.size(); ++k) {
        const Vec2 X = grid.node(k / grid.n(1), k % grid.n(1));
        const double r = rho(X, t), d = divv(X, t);
        src.mass[k] = ref.rate(rho, X, t) + d * r;
        src.momentum[k] = r * ref.rate(v, X, t) - ref.div(S, X, t) - r * F(X, t);
        src.energy[k] = r * ref.rate(e, X, t) + d * sg(X, t) - ref.div(qt, X, t) - diss(X, t);
        src.concentration[k] = ref.rate(flow.concentration, X, t) + d * flow.concentration(X, t) - ref.div(qc, X, t);
    }
    return src;
}

/// Pointwise residuals of both forms of the generalized system at the middle level, and the
/// discrete gap between the conservative residuals and their material-form combinations.
struct GeneralizedResiduals {
    ScalarField mass, energy, concentration;
    VectorField momentum;
    ScalarField mass_conservative, energy_conservative, concentration_conservative;
    VectorField momentum_conservative;
    ScalarField mass_gap, energy_gap, concentration_gap;
    VectorField momentum_gap;

    std::vector<ResidualSummary> summaries(const GridGeometry& geo, const QuadratureRule& rule, double dt) const {
        return {summarize("continuity", mass, geo, rule, dt),
                summarize("momentum", momentum, geo, rule, dt),
                summarize("energy", energy, geo, rule, dt),
                summarize("concentration", concentration, geo, rule, dt),
                summarize("continuity.conservative", mass_conservative, geo, rule, dt),
                summarize("momentum.conservative", momentum_conservative, geo, rule, dt),
                summarize("energy.conservative", energy_conservative, geo, rule, dt),
                summarize("concentration.conservative", concentration_conservative, geo, rule, dt),
                summarize("continuity.gap", mass_gap, geo, rule, dt),
                summarize("momentum.gap", momentum_gap, geo, rule, dt),
                summarize("energy.gap", energy_gap, geo, rule, dt),
                summarize("concentration.gap", concentration_gap, geo, rule, dt)};
    }
};

namespace detail {

template <class T, class Fn>
std::vector<GridField<T>> map_levels(const std::vector<FluidState>& levels, Fn&& fn) {
    std::vector<GridField<T>> out;
    out.reserve(levels.size());
    for (const auto& st : levels) out.push_back(fn(st));
    return out;
}

inline VectorField flux_of(const ScalarField& f, const EnergyDensity& e, const GridGeometry& geo, StencilOrder order) {
    VectorField q = surface_gradient(f, geo, order);
    for (int k = 0; k < geo.size(); ++k) q[k] *= e.d(q[k].squaredNorm());
    return q;
}

}  // namespace detail

/// Residuals on snapshots at equally spaced times (odd count >= 3, geo at the middle one).
/// Time derivatives are central differences at fixed X, which follow the fluid because v is
/// the flow-map velocity. With `src` the manufactured sources are subtracted (conservative
/// ones derived from them), so the residuals measure discretization error only.
inline GeneralizedResiduals residual_generalized_system(const std::vector<FluidState>& levels, double dt, const GridGeometry& geo,
                                                        const ConstitutiveSet& cs, const ManufacturedSources* src = nullptr,
                                                        StencilOrder order = StencilOrder::Fourth) {
    if (levels.size() < 3 || levels.size() % 2 == 0) throw InsufficientTimeLevels("the generalized system needs an odd count of at least 3 levels");
    const FluidState& st = levels[levels.size() / 2];
    const Grid& g = geo.grid;
    const int n = g.size();

    const TensorField gv = surface_gradient(st.v, geo, order);
    ScalarField divv(g, 0.0);
    for (int k = 0; k < n; ++k) divv[k] = gv[k].trace();
    TensorField S(g, Mat3::Zero());
    ScalarField diss(g, 0.0);
    for (int k = 0; k < n; ++k) {
        const Mat3 D = geo[k].P * sym(gv[k]) * geo[k].P;
        S[k] = stress_from(D, divv[k], st.sigma[k], geo[k].P, cs);
        diss[k] = dissipation_from(D, divv[k], cs);
    }
    const VectorField divS = surface_divergence(S, geo, order);
    const VectorField qt = detail::flux_of(st.theta, cs.e3(), geo, order);
    const VectorField qc = detail::flux_of(st.C, cs.e4(), geo, order);
    const ScalarField divqt = surface_divergence(qt, geo, order);
    const ScalarField divqc = surface_divergence(qc, geo, order);

    auto scalar_levels = [&](auto get) { return detail::map_levels<double>(levels, get); };
    auto vector_levels = [&](auto get) { return detail::map_levels<Vec3>(levels, get); };
    const ScalarField drho = lagrangian_rate(scalar_levels([](const FluidState& s) { return s.rho; }), dt);
    const VectorField dv = lagrangian_rate(vector_levels([](const FluidState& s) { return s.v; }), dt);
    const ScalarField de = lagrangian_rate(scalar_levels([](const FluidState& s) { return s.e; }), dt);
    const ScalarField dC = lagrangian_rate(scalar_levels([](const FluidState& s) { return s.C; }), dt);

    GeneralizedResiduals r;
    r.mass = ScalarField(g, 0.0);
    r.energy = ScalarField(g, 0.0);
    r.concentration = ScalarField(g, 0.0);
    r.momentum = VectorField(g, Vec3::Zero());
    for (int k = 0; k < n; ++k) {
        r.mass[k] = drho[k] + divv[k] * st.rho[k];
        r.momentum[k] = st.rho[k] * dv[k] - divS[k] - st.rho[k] * st.F[k];
        r.energy[k] = st.rho[k] * de[k] + divv[k] * st.sigma[k] - divqt[k] - diss[k];
        r.concentration[k] = dC[k] + divv[k] * st.C[k] - divqc[k];
        if (src) {
            r.mass[k] -= src->mass[k];
            r.momentum[k] -= src->momentum[k];
            r.energy[k] -= src->energy[k];
            r.concentration[k] -= src->concentration[k];
        }
    }

    // conservative form with D_t^N = D_t - v . grad_G
    const ScalarField dnrho = material_derivative(scalar_levels([](const FluidState& s) { return s.rho; }), dt, geo, MaterialVariant::Normal);
    const VectorField dnm = material_derivative(vector_levels([](const FluidState& s) {
                                                    VectorField m = s.v;
                                                    for (int k = 0; k < m.size(); ++k) m[k] *= s.rho[k];
                                                    return m;
                                                }),
                                                dt, geo, MaterialVariant::Normal);
    auto total_energy = [](const FluidState& s) {
        ScalarField a = s.e;
        for (int k = 0; k < a.size(); ++k) a[k] = s.rho[k] * (0.5 * s.v[k].squaredNorm() + s.e[k]);
        return a;
    };
    const ScalarField dneA = material_derivative(scalar_levels(total_energy), dt, geo, MaterialVariant::Normal);
    const ScalarField dnC = material_derivative(scalar_levels([](const FluidState& s) { return s.C; }), dt, geo, MaterialVariant::Normal);

    const ScalarField eA = total_energy(st);
    VectorField mass_flux(g, Vec3::Zero()), energy_flux(g, Vec3::Zero()), conc_flux(g, Vec3::Zero());
    TensorField momentum_flux(g, Mat3::Zero());
    for (int k = 0; k < n; ++k) {
        mass_flux[k] = st.rho[k] * st.v[k];
        momentum_flux[k] = st.rho[k] * st.v[k] * st.v[k].transpose() - S[k];
        energy_flux[k] = eA[k] * st.v[k] - qt[k] - S[k] * st.v[k];
        conc_flux[k] = st.C[k] * st.v[k] - qc[k];
    }
    const ScalarField div_mass = surface_divergence(mass_flux, geo, order);
    const VectorField div_momentum = surface_divergence(momentum_flux, geo, order);
    const ScalarField div_energy = surface_divergence(energy_flux, geo, order);
    const ScalarField div_conc = surface_divergence(conc_flux, geo, order);

    r.mass_conservative = ScalarField(g, 0.0);
    r.energy_conservative = ScalarField(g, 0.0);
    r.concentration_conservative = ScalarField(g, 0.0);
    r.momentum_conservative = VectorField(g, Vec3::Zero());
    r.mass_gap = ScalarField(g, 0.0);
    r.energy_gap = ScalarField(g, 0.0);
    r.concentration_gap = ScalarField(g, 0.0);
    r.momentum_gap = VectorField(g, Vec3::Zero());
    for (int k = 0; k < n; ++k) {
        const Vec3& v = st.v[k];
        const double kin = 0.5 * v.squaredNorm() + st.e[k];
        r.mass_conservative[k] = dnrho[k] + div_mass[k];
        r.momentum_conservative[k] = dnm[k] + div_momentum[k] - st.rho[k] * st.F[k];
        r.energy_conservative[k] = dneA[k] + div_energy[k] - st.rho[k] * st.F[k].dot(v);
        r.concentration_conservative[k] = dnC[k] + div_conc[k];
        if (src) {
            r.mass_conservative[k] -= src->mass[k];
            r.momentum_conservative[k] -= src->momentum[k] + v * src->mass[k];
            r.energy_conservative[k] -= src->energy[k] + v.dot(src->momentum[k]) + kin * src->mass[k];
            r.concentration_conservative[k] -= src->concentration[k];
        }
        r.mass_gap[k] = r.mass_conservative[k] - r.mass[k];
        r.momentum_gap[k] = r.momentum_conservative[k] - (r.momentum[k] + v * r.mass[k]);
        r.energy_gap[k] = r.energy_conservative[k] - (r.energy[k] + v.dot(r.momentum[k]) + kin * r.mass[k]);
        r.concentration_gap[k] = r.concentration_conservative[k] - r.concentration[k];
    }
    return r;
}

inline GeneralizedResiduals residual_generalized_system(const ManufacturedLevels& lv, const ConstitutiveSet& cs, const ManufacturedSources* src = nullptr,
                                                        StencilOrder order = StencilOrder::Fourth) {
    return residual_generalized_system(lv.states, lv.dt, lv.geo, cs, src, order);
}

/// Entropy production e_D / theta + e3'(|grad theta|^2) |grad theta|^2 / theta^2 at every node.
inline ScalarField entropy_production(const FluidState& st, const GridGeometry& geo, const ConstitutiveSet& cs,
                                      StencilOrder order = StencilOrder::Second) {
    for (int k = 0; k < geo.size(); ++k)
        if (!(st.rho[k] > 0.0) || !(st.theta[k] > 0.0)) throw NonpositiveThermo("density and temperature must be positive");
    const ScalarField diss = dissipation_density(st.v, geo, cs, order);
    const VectorField gt = surface_gradient(st.theta, geo, order);
    ScalarField out(geo.grid, 0.0, "entropy/(area time)");
    for (int k = 0; k < geo.size(); ++k) {
        const double th = st.theta[k], g2 = gt[k].squaredNorm();
        out[k] = diss[k] / th + cs.e3().d(g2) * g2 / (th * th);
    }
    return out;
}

struct EntropyAudit {
    double min_value = 0.0;
    int node = -1;
    bool passed(double tol = 1e-12) const { return min_value >= -tol; }
};

inline EntropyAudit audit_entropy_production(const FluidState& st, const GridGeometry& geo, const ConstitutiveSet& cs) {
    const ScalarField p = entropy_production(st, geo, cs);
    EntropyAudit a;
    a.min_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k < p.size(); ++k)
        if (p[k] < a.min_value) {
            a.min_value = p[k];
            a.node = k;
        }
    return a;
}

/// Residuals of the enthalpy, entropy and free-energy balances (material form) and of the
/// conservative enthalpy and entropy balances, with h = e + sigma / rho, e_F = e - theta s.
struct ThermoResiduals {
    ScalarField enthalpy, entropy, free_energy;
    ScalarField enthalpy_conservative, entropy_conservative;
    ScalarField production;

    std::vector<ResidualSummary> summaries(const GridGeometry& geo, const QuadratureRule& rule, double dt) const {
        return {summarize("enthalpy", enthalpy, geo, rule, dt),
                summarize("entropy", entropy, geo, rule, dt),
                summarize("free-energy", free_energy, geo, rule, dt),
                summarize("enthalpy.conservative", enthalpy_conservative, geo, rule, dt),
                summarize("entropy.conservative", entropy_conservative, geo, rule, dt)};
    }
};

/// The sources only cancel the analytic defects when the state obeys the Gibbs relation.
inline ThermoResiduals residual_thermodynamics(const std::vector<FluidState>& levels, double dt, const GridGeometry& geo,
                                               const ConstitutiveSet& cs, const ManufacturedSources* src = nullptr,
                                               StencilOrder order = StencilOrder::Fourth) {
    if (levels.size() < 3 || levels.size() % 2 == 0) throw InsufficientTimeLevels("thermodynamic residuals need an odd count of at least 3 levels");
    for (const auto& s : levels)
        for (int k = 0; k < s.rho.size(); ++k)
            if (!(s.rho[k] > 0.0) || !(s.theta[k] > 0.0)) throw NonpositiveThermo("density and temperature must be positive");
    const FluidState& st = levels[levels.size() / 2];
    const Grid& g = geo.grid;
    const int n = g.size();

    const TensorField gv = surface_gradient(st.v, geo, order);
    ScalarField diss(g, 0.0), stress_power(g, 0.0);
    for (int k = 0; k < n; ++k) {
        const double d = gv[k].trace();
        const Mat3 D = geo[k].P * sym(gv[k]) * geo[k].P;
        diss[k] = dissipation_from(D, d, cs);
        stress_power[k] = ddot(stress_from(D, d, st.sigma[k], geo[k].P, cs), D);
    }
    const VectorField qt = detail::flux_of(st.theta, cs.e3(), geo, order);
    const ScalarField divq = surface_divergence(qt, geo, order);
    const VectorField gth = surface_gradient(st.theta, geo, order);

    auto scalar_levels = [&](auto get) { return detail::map_levels<double>(levels, get); };
    auto enthalpy = [](const FluidState& s) {
        ScalarField h = s.e;
        for (int k = 0; k < h.size(); ++k) h[k] = s.e[k] + s.sigma[k] / s.rho[k];
        return h;
    };
    auto free_energy = [](const FluidState& s) {
        ScalarField f = s.e;
        for (int k = 0; k < f.size(); ++k) f[k] = s.e[k] - s.theta[k] * s.s[k];
        return f;
    };
    const ScalarField dh = lagrangian_rate(scalar_levels(enthalpy), dt);
    const ScalarField ds = lagrangian_rate(scalar_levels([](const FluidState& s) { return s.s; }), dt);
    const ScalarField dF = lagrangian_rate(scalar_levels(free_energy), dt);
    const ScalarField dth = lagrangian_rate(scalar_levels([](const FluidState& s) { return s.theta; }), dt);
    const ScalarField dsig = lagrangian_rate(scalar_levels([](const FluidState& s) { return s.sigma; }), dt);
    const ScalarField dnrh = material_derivative(scalar_levels([&](const FluidState& s) {
                                                     ScalarField a = enthalpy(s);
                                                     for (int k = 0; k < a.size(); ++k) a[k] *= s.rho[k];
                                                     return a;
                                                 }),
                                                 dt, geo, MaterialVariant::Normal);
    const ScalarField dnrs = material_derivative(scalar_levels([](const FluidState& s) {
                                                     ScalarField a = s.s;
                                                     for (int k = 0; k < a.size(); ++k) a[k] *= s.rho[k];
                                                     return a;
                                                 }),
                                                 dt, geo, MaterialVariant::Normal);
    const ScalarField h = enthalpy(st);
    VectorField fh(g, Vec3::Zero()), fs(g, Vec3::Zero());
    for (int k = 0; k < n; ++k) {
        fh[k] = st.rho[k] * h[k] * st.v[k] - qt[k];
        fs[k] = st.rho[k] * st.s[k] * st.v[k] - qt[k] / st.theta[k];
    }
    const ScalarField divfh = surface_divergence(fh, geo, order);
    const ScalarField divfs = surface_divergence(fs, geo, order);

    ThermoResiduals r;
    r.enthalpy = ScalarField(g, 0.0);
    r.entropy = ScalarField(g, 0.0);
    r.free_energy = ScalarField(g, 0.0);
    r.enthalpy_conservative = ScalarField(g, 0.0);
    r.entropy_conservative = ScalarField(g, 0.0);
    r.production = ScalarField(g, 0.0);
    for (int k = 0; k < n; ++k) {
        const double rho = st.rho[k], th = st.theta[k], g2 = gth[k].squaredNorm();
        r.production[k] = diss[k] / th + cs.e3().d(g2) * g2 / (th * th);
        r.enthalpy[k] = rho * dh[k] - divq[k] - diss[k] - dsig[k];
        r.entropy[k] = th * rho * ds[k] - divq[k] - diss[k];
        r.free_energy[k] = rho * dF[k] + st.s[k] * rho * dth[k] - stress_power[k] + diss[k];
        r.enthalpy_conservative[k] = dnrh[k] + divfh[k] - diss[k] - dsig[k];
        r.entropy_conservative[k] = dnrs[k] + divfs[k] - r.production[k];
        if (src) {
            const double heat = src->energy[k] - st.sigma[k] * src->mass[k] / rho;
            r.enthalpy[k] -= heat;
            r.entropy[k] -= heat;
            r.free_energy[k] -= st.sigma[k] * src->mass[k] / rho;
            r.enthalpy_conservative[k] -= heat + h[k] * src->mass[k];
            r.entropy_conservative[k] -= heat / th + st.s[k] * src->mass[k];
        }
    }
    return r;
}

inline ThermoResiduals residual_thermodynamics(const ManufacturedLevels& lv, const ConstitutiveSet& cs, const ManufacturedSources* src = nullptr,
                                               StencilOrder order = StencilOrder::Fourth) {
    return residual_thermodynamics(lv.states, lv.dt, lv.geo, cs, src, order);
}

// ---------------------------------------------------------------------------------------
// Balance audits

/// Integrated balances of a closed-form flow sampled at `steps` + 1 equally spaced times on
/// [t0, t1]. Each sample carries the energy-law residual
///   KE(t) - KE(t0) + int (e_D - (div v) sigma - rho F . v)
/// (time trapezoid) when the boundary mode makes the boundary power vanish, NaN for None.
/// Also returns the time-integrated source terms of the momentum balances.
struct ManufacturedBalance {
    BalanceReport report;
    std::vector<Vec3> force_integral;   // int_t0^t int rho F
    std::vector<Vec3> torque_integral;  // int_t0^t int x x rho F
};

inline ManufacturedBalance manufactured_balance(const ManufacturedFlow& flow, const ConstitutiveSet& cs, const Grid& grid, double t0, double t1,
                                                int steps, BoundaryMode mode, InteriorRule interior = InteriorRule::Trapezoid) {
    if (steps < 1) throw DomainError("at least one time step is needed");
    const QuadratureRule rule = make_rule(grid, interior);
    const double dt = (t1 - t0) / steps;
    ManufacturedBalance out;
    std::vector<double> power;
    std::vector<Vec3> force, torque;
    double ke0 = 0.0;
    for (int q = 0; q <= steps; ++q) {
        const double t = t0 + q * dt;
        const GridGeometry geo = build_geometry(flow.spec, grid, t);
        const FluidState st = flow.sample(geo);
        const ScalarField diss = dissipation_density(st.v, geo, cs);
        const ScalarField divv = surface_divergence(st.v, geo);
        ScalarField pw(grid, 0.0), ke(grid, 0.0);
        VectorField f(grid, Vec3::Zero()), tq(grid, Vec3::Zero());
        for (int k = 0; k < grid.size(); ++k) {
            ke[k] = 0.5 * st.rho[k] * st.v[k].squaredNorm();
            pw[k] = divv[k] * st.sigma[k] + st.rho[k] * st.F[k].dot(st.v[k]) - diss[k];
            f[k] = st.rho[k] * st.F[k];
            tq[k] = geo[k].x.cross(f[k]);
        }
        power.push_back(surface_integral(pw, geo, rule));
        force.push_back(surface_integral(f, geo, rule));
        torque.push_back(surface_integral(tq, geo, rule));
        const double kin = surface_integral(ke, geo, rule);
        if (q == 0) ke0 = kin;
        BalanceSample b = balance_sample(st, geo, rule);
        if (mode != BoundaryMode::None) b.energy_residual = kin - ke0 - time_trapezoid(power, dt);
        out.report.samples.push_back(b);
        out.force_integral.push_back(time_trapezoid(force, dt));
        out.torque_integral.push_back(time_trapezoid(torque, dt));
    }
    return out;
}

namespace detail {

inline CheckRow vector_row(std::string name, double h, double dt, const Vec3& lhs, const Vec3& rhs) {
    CheckRow r;
    r.name = std::move(name);
    r.h = h;
    r.dt = dt;
    r.lhs = lhs.norm();
    r.rhs = rhs.norm();
    r.abs_residual = (lhs - rhs).norm();
    r.rel_residual = r.abs_residual / std::max({r.lhs, r.rhs, 1.0});
    return r;
}

}  // namespace detail

/// Momentum and angular-momentum drift over [t0, t1] against the integrated force and torque
/// for a flow whose stress vanishes on the boundary. Rows "momentum-balance" and
/// "angular-momentum-balance"; the residual is the norm of the vector difference.
inline std::vector<CheckRow> check_momentum_balances(const ManufacturedFlow& flow, const ConstitutiveSet& cs, int n1, int n2, double t0,
                                                     double t1, int steps) {
    const Grid grid(flow.spec.domain, n1, n2);
    const ManufacturedBalance mb = manufactured_balance(flow, cs, grid, t0, t1, steps, BoundaryMode::StressFree);
    const auto& first = mb.report.samples.front();
    const auto& last = mb.report.samples.back();
    const double dt = (t1 - t0) / steps;
    return {detail::vector_row("momentum-balance", grid.h(), dt, last.momentum - first.momentum, mb.force_integral.back()),
            detail::vector_row("angular-momentum-balance", grid.h(), dt, last.angular_momentum - first.angular_momentum,
                               mb.torque_integral.back())};
}

/// Compactly supported symmetric tangential stress: bump(X) P M(x) P with M symmetric.
inline ParamTensorFn compact_symmetric_stress(const FlowMapSpec& spec, double fraction = 0.75) {
    const auto bump = interior_bump(spec.domain, fraction);
    return [spec, bump](const Vec2& X, double t) {
        const MetricState m = eval_metric_unchecked(spec, X, t);
        const Vec3& x = m.x;
        Mat3 M;
        M << 1.0 + x[0] * x[0], 0.3 * x[1], x[0] * x[2],  //
            0.3 * x[1], 0.5 + std::sin(x[1]), 0.2 * x[0] * x[1],  //
            x[0] * x[2], 0.2 * x[0] * x[1], 0.7 + x[2];
        return Mat3(bump(X, t) * m.P * M * m.P);
    };
}

/// |int x x div_G S| by quadrature with the grid divergence; zero for symmetric tangential S
/// with S nu = 0 on the boundary.
inline CheckRow check_angular_moment(const FlowMapSpec& spec, const ParamTensorFn& S, int n1, int n2, double t = 0.0,
                                     InteriorRule interior = InteriorRule::Trapezoid) {
    const Grid grid(spec.domain, n1, n2);
    const GridGeometry geo = build_geometry(spec, grid, t);
    const TensorField Sf = make_field<Mat3>(grid, [&](int k) { return S(grid.node(k / grid.n(1), k % grid.n(1)), t); });
    const VectorField divS = surface_divergence(Sf, geo);
    VectorField moment(grid, Vec3::Zero());
    for (int k = 0; k < grid.size(); ++k) moment[k] = geo[k].x.cross(divS[k]);
    const Vec3 total = surface_integral(moment, geo, make_rule(grid, interior));
    return detail::vector_row("angular-moment", grid.h(), 0.0, total, Vec3::Zero());
}

// ---------------------------------------------------------------------------------------
// Catalog

namespace manufactured {

/// Entropy and concentration profiles shared by the catalog flows.
inline ParamScalarFn smooth_entropy(const FlowMapSpec& spec) {
    return pull(spec, AmbientScalarFn([](const Vec3& x, double t) {
        return 0.2 * std::sin(x[0] + 0.5 * t) * std::cos(0.8 * x[1]) + 0.1 * x[2];
    }));
}

inline ParamScalarFn smooth_concentration(const FlowMapSpec& spec) {
    return pull(spec, AmbientScalarFn([](const Vec3& x, double t) { return 1.0 + 0.3 * std::cos(x[0] - 0.4 * x[1] + t) + 0.2 * x[2]; }));
}

inline AmbientScalarFn smooth_density() {
    return [](const Vec3& x, double) { return 1.0 + 0.2 * std::sin(x[0] + 0.3) * std::cos(0.5 * x[1]) + 0.1 * x[2]; };
}

/// Nontrivial thermodynamic state with the Gibbs closure on the given surface.
inline ManufacturedFlow thermal(const FlowMapSpec& spec) {
    ManufacturedFlow f;
    f.name = "thermal:" + spec.name;
    f.spec = spec;
    f.rho0 = smooth_density();
    f.entropy = smooth_entropy(spec);
    f.concentration = smooth_concentration(spec);
    f.force = pull(spec, AmbientVectorFn([](const Vec3& x, double t) { return Vec3(0.1 * x[1], -0.2 + 0.1 * t, 0.05 * x[0]); }));
    return f;
}

/// Stress-free flow on the swirling disk: off-centre tension bump that breathes in time,
/// force chosen by balancing_force so both momentum laws hold exactly.
inline ManufacturedFlow swirling(const ConstitutiveSet& cs, double radius = 1.0) {
    ManufacturedFlow f;
    f.spec = surfaces::swirling_disk(radius);
    f.name = "swirling:" + f.spec.name;
    f.rho0 = [](const Vec3& x, double) { return 1.0 + 0.2 * x[0] + 0.1 * x[1] * x[1]; };
    f.entropy = smooth_entropy(f.spec);
    f.concentration = smooth_concentration(f.spec);
    const FlowMapSpec spec = f.spec;
    f.tension = [spec, radius](const Vec2& X, double t) {
        const Vec3 p = spec.reference(X) - Vec3(0.25 * radius, 0.1 * radius, 0.0);
        return (1.0 + 0.5 * std::sin(2.0 * t)) * smooth_bump(p.norm() / (0.45 * radius));
    };
    f.force = balancing_force(f, cs);
    return f;
}

/// v = 0 and constant tension on a stationary sphere cap: the momentum residual is sigma H n.
inline ManufacturedFlow tension_cap(double sigma = 0.7, double theta_max = 1.2) {
    ManufacturedFlow f;
    f.spec = surfaces::sphere_cap(1.0, 0.0, theta_max);
    f.name = "tension:" + f.spec.name;
    f.tension = [sigma](const Vec2&, double) { return sigma; };
    f.temperature = [](const Vec2&, double) { return 1.0; };
    return f;
}

/// Rest state on the flat disk: v = 0, constant density, entropy and tension.
inline ManufacturedFlow rest_disk() {
    ManufacturedFlow f;
    f.spec = surfaces::flat_disk();
    f.name = "rest:" + f.spec.name;
    f.entropy = [](const Vec2&, double) { return 0.3; };
    f.concentration = [](const Vec2&, double) { return 0.5; };
    return f;
}

}  // namespace manufactured
}  // namespace surfcalc
