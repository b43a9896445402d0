#pragma once

#include "surfcalc/solver/discretization.hpp"
#include "surfcalc/solver/state.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <optional>

namespace surfcalc {

/// Sparse matrix A with A c = sqrtG * laplace_beltrami(c, kappa, geo, EdgeFlux::Zero) for a
/// constant kappa: the same face fluxes, assembled once.
inline Eigen::SparseMatrix<double, Eigen::RowMajor> assemble_diffusion_matrix(const GridGeometry& geo, double kappa) {
    const Grid& g = geo.grid;
    const int n = g.size();
    std::array<ScalarField, 4> c;
    for (auto& ci : c) ci = ScalarField(g, 0.0);
    for (int k = 0; k < n; ++k) {
        const double w = kappa * geo[k].sqrtG;
        c[0][k] = w * geo[k].ginv(0, 0);
        c[1][k] = w * geo[k].ginv(0, 1);
        c[2][k] = w * geo[k].ginv(1, 0);
        c[3][k] = w * geo[k].ginv(1, 1);
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 16);

    // ghost and wrapped neighbours map back to real nodes before their stencils are taken
    auto real_node = [&](int i, int j) {
        const int k = resolve_index(g, i, j);
        return std::pair<int, int>{k / g.n(1), k % g.n(1)};
    };
    auto face = [&](int row, int a, int i, int j, double scale) {
        const int i2 = a == 0 ? i + 1 : i;
        const int j2 = a == 0 ? j : j + 1;
        const auto [ri1, rj1] = real_node(i, j);
        const auto [ri2, rj2] = real_node(i2, j2);
        const int k1 = g.index(ri1, rj1), k2 = g.index(ri2, rj2);
        const double h = g.spacing(a);
        const auto& caa = c[static_cast<std::size_t>(3 * a)];
        const auto& cab = c[static_cast<std::size_t>(a == 0 ? 1 : 2)];
        const double diag = 0.5 * (caa[k1] + caa[k2]) / h;
        trip.emplace_back(row, k2, scale * diag);
        trip.emplace_back(row, k1, -scale * diag);
        const double mixed = 0.25 * (cab[k1] + cab[k2]);
        if (mixed == 0.0) return;
        for (const auto& [node, w] : derivative_weights(g, ri1, rj1, 1 - a)) trip.emplace_back(row, node, scale * mixed * w);
        for (const auto& [node, w] : derivative_weights(g, ri2, rj2, 1 - a)) trip.emplace_back(row, node, scale * mixed * w);
    };

    for (int i = 0; i < g.n(0); ++i)
        for (int j = 0; j < g.n(1); ++j) {
            const int row = g.index(i, j);
            for (int a = 0; a < 2; ++a) {
                const int p = a == 0 ? i : j;
                const bool lower = g.on_lower_boundary(a, p) || (g.kind(a) == AxisKind::Polar && p == 0);
                const bool upper = g.on_upper_boundary(a, p);
                const double width = (g.on_boundary(a, p) ? 0.5 : 1.0) * g.spacing(a);
                if (!upper) face(row, a, i, j, 1.0 / width);
                if (!lower) face(row, a, a == 0 ? i - 1 : i, a == 0 ? j : j - 1, -1.0 / width);
            }
        }
    Eigen::SparseMatrix<double, Eigen::RowMajor> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

struct DiffusionOptions {
    double cfl = 0.9;        // fraction of the RK4 bound 2.78 / lambda_max used by run()
    double cfl_limit = 1.0;  // step() refuses dt above cfl_limit times the bound
    bool pole_filter = true;
    InteriorRule rule = InteriorRule::Trapezoid;
    int record_every = 1;
};

/// Explicit RK4 for D_t C + (div_G v) C = div_G q_C with q_C = e4'(|grad C|^2) grad C and zero
/// co-normal flux. The unknown is the area amount M = sqrtG C on the parameter grid, so that
/// d/dt M = sqrtG div_G q_C along the flow map; total amount is conserved by construction.
class DiffusionSolver {
public:
    DiffusionSolver(FlowMapSpec spec, Grid grid, EnergyDensity e4, DiffusionOptions opt = {})
        : cache_(std::move(spec), std::move(grid)), e4_(std::move(e4)), opt_(opt), rule_(make_rule(cache_.grid(), opt_.rule)) {
        const GridGeometry& geo = cache_.at(0.0);
        if (opt_.pole_filter) filter_ = PoleFilter(geo);
        linear_ = is_constant(e4_);
        if (linear_ && cache_.spec().stationary) matrix_ = assemble_diffusion_matrix(geo, e4_.d(0.0));
    }

    const Grid& grid() const { return cache_.grid(); }
    const QuadratureRule& rule() const { return rule_; }
    const GridGeometry& geometry(double t) { return cache_.at(t); }
    bool uses_cached_operator() const { return matrix_.has_value(); }

    /// e'(r) sampled on [0, 20]; constant means the flux is linear in grad C.
    static bool is_constant(const EnergyDensity& e) {
        const double d0 = e.d(0.0);
        for (double r : {0.25, 0.5, 1.0, 2.0, 5.0, 20.0})
            if (e.d(r) != d0) return false;
        return true;
    }

    /// 2.78 / lambda_max with lambda_max = max 4 kappa (g^11 / h1^2 + g^22 sin^2(m_max h2 / 2) / h2^2),
    /// m_max the azimuthal cutoff of the pole filter (n2 / 2 without one).
    double stability_bound(const ScalarField& C, double t) {
        const GridGeometry& geo = cache_.at(t);
        const Grid& g = geo.grid;
        ScalarField kappa(g, e4_.d(0.0));
        if (!linear_) {
            const VectorField gc = surface_gradient(C, geo);
            for (int k = 0; k < g.size(); ++k) kappa[k] = e4_.d(gc[k].squaredNorm());
        }
        const double h1 = g.spacing(0), h2 = g.spacing(1);
        double lam = 0.0;
        for (int i = 0; i < g.n(0); ++i) {
            // largest kept azimuthal symbol (2 sin(m h2 / 2) / h2)^2 on this ring
            const int m = filter_.active() ? filter_.cutoff(i) : g.n(1) / 2;
            const double sym2 = std::pow(std::sin(std::min(0.5 * pi, 0.5 * m * h2)), 2);
            for (int j = 0; j < g.n(1); ++j) {
                const int k = g.index(i, j);
                const double s = geo[k].ginv(0, 0) / (h1 * h1) + geo[k].ginv(1, 1) * sym2 / (h2 * h2);
                lam = std::max(lam, 4.0 * std::abs(kappa[k]) * s);
            }
        }
        return lam > 0.0 ? 2.78 / lam : std::numeric_limits<double>::infinity();
    }

    /// d/dt (sqrtG C) at time t.
    ScalarField tendency(const ScalarField& C, double t) {
        const GridGeometry& geo = cache_.at(t);
        ScalarField out(geo.grid, 0.0);
        if (matrix_) {
            Eigen::Map<const Eigen::VectorXd> c(C.values.data(), C.size());
            Eigen::Map<Eigen::VectorXd> o(out.values.data(), out.size());
            o.noalias() = (*matrix_) * c;
        } else {
            ScalarField kappa(geo.grid, e4_.d(0.0));
            if (!linear_) {
                const VectorField gc = surface_gradient(C, geo);
                for (int k = 0; k < geo.size(); ++k) kappa[k] = e4_.d(gc[k].squaredNorm());
            }
            const ScalarField lb = laplace_beltrami(C, kappa, geo, EdgeFlux::Zero);
            for (int k = 0; k < geo.size(); ++k) out[k] = geo[k].sqrtG * lb[k];
        }
        filter_.apply(out);
        return out;
    }

    ScalarField step(const ScalarField& C, double t, double dt) {
        if (!(dt > 0.0)) throw DomainError("time step must be positive");
        if (dt > opt_.cfl_limit * stability_bound(C, t)) throw CFLViolation("time step exceeds the diffusion stability bound");
        const int n = C.size();
        const GridGeometry& g0 = cache_.at(t);
        std::vector<double> M0(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) M0[static_cast<std::size_t>(k)] = g0[k].sqrtG * C[k];

        auto state_at = [&](double ts, const ScalarField& dM, double c) {
            const GridGeometry& geo = cache_.at(ts);
            ScalarField out(geo.grid, 0.0, C.units);
            for (int k = 0; k < n; ++k) out[k] = (M0[static_cast<std::size_t>(k)] + c * dM[k]) / geo[k].sqrtG;
            return out;
        };
        const ScalarField k1 = tendency(C, t);
        const ScalarField k2 = tendency(state_at(t + 0.5 * dt, k1, 0.5 * dt), t + 0.5 * dt);
        const ScalarField k3 = tendency(state_at(t + 0.5 * dt, k2, 0.5 * dt), t + 0.5 * dt);
        const ScalarField k4 = tendency(state_at(t + dt, k3, dt), t + dt);
        ScalarField sum(grid(), 0.0);
        for (int k = 0; k < n; ++k) sum[k] = (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]) / 6.0;
        return state_at(t + dt, sum, dt);
    }

    double total(const ScalarField& C, double t) { return surface_integral(C, cache_.at(t), rule_); }

    /// Runs C from t0 to t_end with a fixed step (the CFL target at the start unless given).
    /// Samples carry t, the total amount and the state's other integrals.
    BalanceReport run(FluidState st, double t_end, double dt = 0.0) {
        const double window = t_end - st.t;
        if (!(window > 0.0)) throw DomainError("empty time window");
        if (dt <= 0.0) dt = opt_.cfl * stability_bound(st.C, st.t);
        const int steps = static_cast<int>(std::ceil(window / dt - 1e-12));
        dt = window / steps;
        BalanceReport report;
        report.samples.push_back(balance_sample(st, cache_.at(st.t), rule_));
        for (int q = 1; q <= steps; ++q) {
            st.C = step(st.C, st.t, dt);
            st.t = st.t + dt;
            if (q % std::max(1, opt_.record_every) == 0 || q == steps) report.samples.push_back(balance_sample(st, cache_.at(st.t), rule_));
        }
        last_ = std::move(st);
        return report;
    }

    const FluidState& last_state() const { return last_; }

private:
    GeometryCache cache_;
    EnergyDensity e4_;
    DiffusionOptions opt_;
    QuadratureRule rule_;
    PoleFilter filter_;
    bool linear_ = false;
    std::optional<Eigen::SparseMatrix<double, Eigen::RowMajor>> matrix_;
    FluidState last_;
};

/// One RK4 step of the concentration equation (see DiffusionSolver).
inline ScalarField step_surface_diffusion(const ScalarField& C, const FlowMapSpec& spec, const Grid& grid, const ConstitutiveSet& cs,
                                          double t, double dt, const DiffusionOptions& opt = {}) {
    DiffusionSolver solver(spec, grid, cs.e4(), opt);
    return solver.step(C, t, dt);
}

/// Decay rate of the projection of C onto a fixed profile between two times.
inline double projected_decay_rate(const ScalarField& c_early, const ScalarField& c_late, double dt_between, const ScalarField& profile,
                                   const GridGeometry& geo, const QuadratureRule& rule) {
    ScalarField a(geo.grid, 0.0), b(geo.grid, 0.0);
    for (int k = 0; k < geo.size(); ++k) {
        a[k] = c_early[k] * profile[k];
        b[k] = c_late[k] * profile[k];
    }
    return std::log(surface_integral(a, geo, rule) / surface_integral(b, geo, rule)) / dt_between;
}

}  // namespace surfcalc
