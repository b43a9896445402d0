#pragma once

#include "surfcalc/solver/discretization.hpp"
#include "surfcalc/solver/state.hpp"

#include <cmath>
#include <string>

namespace surfcalc {

enum class BoundaryMode { NoSlip, StressFree, None };

inline std::string to_string(BoundaryMode b) {
    switch (b) {
        case BoundaryMode::NoSlip: return "no-slip";
        case BoundaryMode::StressFree: return "stress-free";
        case BoundaryMode::None: return "none";
    }
    return "?";
}

struct BarotropicOptions {
    PressureLaw pressure = laws::quadratic_pressure();
    double cfl = 0.4;        // fraction of the acoustic bound used by run()
    double cfl_limit = 1.0;  // step() refuses dt above cfl_limit times the bound
    bool pole_filter = true;
    InteriorRule rule = InteriorRule::Trapezoid;
    int record_every = 1;
    BoundaryMode boundary = BoundaryMode::NoSlip;  // StressFree keeps the tangential slip along the edge
};

/// Explicit RK4 for the tangential barotropic system on a prescribed surface whose motion is
/// tangential (w . n = 0). Unknowns are the area mass m = sqrtG rho on the fixed parameter
/// grid and the ambient velocity v; the grid follows the flow map, so material derivatives
/// carry the relative velocity u = v - w. Continuity is a flux divergence with closed edges;
/// v is re-projected onto the tangent plane after every stage; at boundary nodes it is zeroed
/// (no-slip) or has its co-normal part removed (stress-free, v . nu = 0; corners are zeroed).
class BarotropicSolver {
public:
    BarotropicSolver(FlowMapSpec spec, Grid grid, BarotropicOptions opt = {})
        : cache_(std::move(spec), std::move(grid)), opt_(std::move(opt)), rule_(make_rule(cache_.grid(), opt_.rule)) {
        const GridGeometry& geo = cache_.at(0.0);
        if (opt_.pole_filter) filter_ = PoleFilter(geo);
        check_tangential_motion(geo);
        if (opt_.boundary == BoundaryMode::None) throw DomainError("the barotropic solver needs a no-slip or stress-free boundary");
    }

    const Grid& grid() const { return cache_.grid(); }
    const QuadratureRule& rule() const { return rule_; }
    const BarotropicOptions& options() const { return opt_; }
    const GridGeometry& geometry(double t) { return cache_.at(t); }

    /// Largest stable step estimate: h_eff / (max sound speed + max relative speed).
    double stability_bound(const FluidState& st) {
        const GridGeometry& geo = cache_.at(st.t);
        double speed = 0.0;
        for (int k = 0; k < geo.size(); ++k) {
            const double c2 = opt_.pressure.sound_speed2(st.rho[k]);
            const double u = (st.v[k] - geo.velocity[static_cast<std::size_t>(k)]).norm();
            speed = std::max(speed, std::sqrt(std::max(c2, 0.0)) + u);
        }
        const double h = effective_length(geo, filter_);
        return speed > 0.0 ? h / speed : std::numeric_limits<double>::infinity();
    }

    double stable_dt(const FluidState& st) { return opt_.cfl * stability_bound(st); }

    FluidState step(const FluidState& st, double dt) {
        if (!(dt > 0.0)) throw DomainError("time step must be positive");
        if (dt > opt_.cfl_limit * stability_bound(st)) throw CFLViolation("time step exceeds the acoustic stability bound");
        require_positive_density(st.rho);
        const double t = st.t;
        const GridGeometry& g0 = cache_.at(t);
        const int n = g0.size();

        ScalarField m0(grid(), 0.0);
        for (int k = 0; k < n; ++k) m0[k] = g0[k].sqrtG * st.rho[k];

        auto stage = [&](double ts, const ScalarField& m, const VectorField& v, ScalarField& dm, VectorField& dv) {
            tendency(cache_.at(ts), m, v, dm, dv);
        };
        auto advance = [&](double ts, const ScalarField& dm, const VectorField& dv, double c, ScalarField& m, VectorField& v) {
            const GridGeometry& geo = cache_.at(ts);
            for (int k = 0; k < n; ++k) {
                m[k] = m0[k] + c * dm[k];
                v[k] = geo[k].P * (st.v[k] + c * dv[k]);
            }
            enforce_boundary(v, geo);
            for (int k = 0; k < n; ++k)
                if (!(m[k] > 0.0)) throw NonpositiveDensity("density is not positive in a Runge-Kutta stage");
        };

        ScalarField k1m, k2m, k3m, k4m, m(grid(), 0.0);
        VectorField k1v, k2v, k3v, k4v, v(grid(), Vec3::Zero());
        stage(t, m0, st.v, k1m, k1v);
        advance(t + 0.5 * dt, k1m, k1v, 0.5 * dt, m, v);
        stage(t + 0.5 * dt, m, v, k2m, k2v);
        advance(t + 0.5 * dt, k2m, k2v, 0.5 * dt, m, v);
        stage(t + 0.5 * dt, m, v, k3m, k3v);
        advance(t + dt, k3m, k3v, dt, m, v);
        stage(t + dt, m, v, k4m, k4v);

        ScalarField dm(grid(), 0.0);
        VectorField dv(grid(), Vec3::Zero());
        for (int k = 0; k < n; ++k) {
            dm[k] = (k1m[k] + 2.0 * k2m[k] + 2.0 * k3m[k] + k4m[k]) / 6.0;
            dv[k] = (k1v[k] + 2.0 * k2v[k] + 2.0 * k3v[k] + k4v[k]) / 6.0;
        }
        advance(t + dt, dm, dv, dt, m, v);

        const GridGeometry& g1 = cache_.at(t + dt);
        FluidState out = st;
        out.t = t + dt;
        out.v = v;
        for (int k = 0; k < n; ++k) {
            out.rho[k] = m[k] / g1[k].sqrtG;
            out.e[k] = opt_.pressure.p(out.rho[k]) / out.rho[k];
        }
        return out;
    }

    /// Kinetic energy and pressure power integral(div v) pe at the state's time.
    std::pair<double, double> energy_terms(const FluidState& st) {
        const GridGeometry& geo = cache_.at(st.t);
        const ScalarField divv = surface_divergence(st.v, geo);
        ScalarField ke(grid(), 0.0), work(grid(), 0.0);
        for (int k = 0; k < geo.size(); ++k) {
            ke[k] = 0.5 * st.rho[k] * st.v[k].squaredNorm();
            work[k] = divv[k] * opt_.pressure.effective(st.rho[k]);
        }
        return {surface_integral(ke, geo, rule_), surface_integral(work, geo, rule_)};
    }

    /// Runs to t_end with the fixed step that divides the window evenly and does not exceed the
    /// CFL target at the start. The energy residual is KE(t) - KE(0) - time integral of the power.
    BalanceReport run(FluidState st, double t_end, double dt = 0.0) {
        const double window = t_end - st.t;
        if (!(window > 0.0)) throw DomainError("empty time window");
        if (dt <= 0.0) dt = stable_dt(st);
        const int steps = static_cast<int>(std::ceil(window / dt - 1e-12));
        dt = window / steps;
        for (int k = 0; k < st.rho.size(); ++k) st.e[k] = opt_.pressure.p(st.rho[k]) / st.rho[k];
        enforce_boundary(st.v, cache_.at(st.t));

        BalanceReport report;
        const auto [ke0, w0] = energy_terms(st);
        std::vector<double> power{w0};
        auto record = [&](const FluidState& s, double ke) {
            BalanceSample b = balance_sample(s, cache_.at(s.t), rule_);
            b.energy_residual = ke - ke0 - time_trapezoid(power, dt);
            report.samples.push_back(b);
        };
        record(st, ke0);
        for (int q = 1; q <= steps; ++q) {
            st = step(st, dt);
            const auto [ke, w] = energy_terms(st);
            power.push_back(w);
            if (q % std::max(1, opt_.record_every) == 0 || q == steps) record(st, ke);
        }
        last_ = std::move(st);
        return report;
    }

    const FluidState& last_state() const { return last_; }

private:
    void check_tangential_motion(const GridGeometry& geo) const {
        for (int k = 0; k < geo.size(); ++k) {
            const Vec3& w = geo.velocity[static_cast<std::size_t>(k)];
            if (std::abs(w.dot(geo[k].n)) > 1e-9 * std::max(1.0, w.norm()))
                throw DomainError("the tangential system needs a surface motion with w . n = 0");
        }
    }

    void enforce_boundary(VectorField& v, const GridGeometry& geo) const {
        const Grid& g = grid();
        if (opt_.boundary == BoundaryMode::NoSlip) {
            for (int i = 0; i < g.n(0); ++i)
                for (int j = 0; j < g.n(1); ++j)
                    if (g.is_boundary_node(i, j)) v(i, j) = Vec3::Zero();
            return;
        }
        std::vector<int> hits(static_cast<std::size_t>(g.size()), 0);
        for (const auto& seg : geo.boundary)
            for (const auto& b : seg.nodes) ++hits[static_cast<std::size_t>(b.node)];
        for (const auto& seg : geo.boundary)
            for (const auto& b : seg.nodes) {
                Vec3& w = v[b.node];
                if (hits[static_cast<std::size_t>(b.node)] > 1) w = Vec3::Zero();
                else w -= w.dot(b.nu) * b.nu;
            }
    }

    void tendency(const GridGeometry& geo, const ScalarField& m, const VectorField& v, ScalarField& dm, VectorField& dv) const {
        const Grid& g = geo.grid;
        const int n = g.size();
        std::array<ScalarField, 2> flux = {ScalarField(g, 0.0), ScalarField(g, 0.0)};
        std::array<ScalarField, 2> ua = flux;
        ScalarField pe(g, 0.0), rho(g, 0.0);
        for (int k = 0; k < n; ++k) {
            const Vec3 u = v[k] - geo.velocity[static_cast<std::size_t>(k)];
            ua[0][k] = geo[k].up1.dot(u);
            ua[1][k] = geo[k].up2.dot(u);
            flux[0][k] = m[k] * ua[0][k];
            flux[1][k] = m[k] * ua[1][k];
            rho[k] = m[k] / geo[k].sqrtG;
            pe[k] = opt_.pressure.effective(rho[k]);
        }
        dm = flux_divergence(flux, g);
        for (auto& x : dm.values) x = -x;
        const VectorField gp = surface_gradient(pe, geo);
        const VectorField dv1 = param_derivative(v, g, 0);
        const VectorField dv2 = param_derivative(v, g, 1);
        dv = VectorField(g, Vec3::Zero());
        for (int i = 0; i < g.n(0); ++i)
            for (int j = 0; j < g.n(1); ++j) {
                if (opt_.boundary == BoundaryMode::NoSlip && g.is_boundary_node(i, j)) continue;
                const int k = g.index(i, j);
                dv[k] = geo[k].P * (-(ua[0][k] * dv1[k] + ua[1][k] * dv2[k])) - gp[k] / rho[k];
            }
        filter_.apply(dm);
        filter_.apply(dv);
    }

    GeometryCache cache_;
    BarotropicOptions opt_;
    QuadratureRule rule_;
    PoleFilter filter_;
    FluidState last_;
};

/// One RK4 step of the tangential barotropic system (see BarotropicSolver).
inline FluidState step_tangential_barotropic(const FluidState& st, const FlowMapSpec& spec, const Grid& grid, double dt,
                                             const BarotropicOptions& opt = {}) {
    BarotropicSolver solver(spec, grid, opt);
    return solver.step(st, dt);
}

}  // namespace surfcalc
