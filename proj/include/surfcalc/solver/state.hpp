#pragma once

#include "surfcalc/calculus/operators.hpp"
#include "surfcalc/errors.hpp"
#include "surfcalc/identities/report.hpp"
#include "surfcalc/quadrature/quadrature.hpp"

#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace surfcalc {

/// Fluid fields on one grid at one time.
struct FluidState {
    double t = 0.0;
    ScalarField rho;    // mass/area
    VectorField v;      // length/time
    ScalarField theta;  // temperature
    ScalarField C;      // amount/area
    ScalarField sigma;  // force/length
    ScalarField e;      // energy/mass
    VectorField F;      // force/mass
    ScalarField s;      // entropy/mass

    static FluidState zeros(const Grid& g, double t = 0.0) {
        FluidState st;
        st.t = t;
        st.rho = ScalarField(g, 1.0, "mass/area");
        st.v = VectorField(g, Vec3::Zero(), "length/time");
        st.theta = ScalarField(g, 1.0, "temperature");
        st.C = ScalarField(g, 0.0, "amount/area");
        st.sigma = ScalarField(g, 0.0, "force/length");
        st.e = ScalarField(g, 0.0, "energy/mass");
        st.F = VectorField(g, Vec3::Zero(), "force/mass");
        st.s = ScalarField(g, 0.0, "entropy/mass");
        return st;
    }
};

inline double max_normal_velocity(const FluidState& st, const GridGeometry& geo) {
    double m = 0.0;
    for (int k = 0; k < geo.size(); ++k) m = std::max(m, std::abs(geo[k].n.dot(st.v[k])));
    return m;
}

inline void require_positive_density(const ScalarField& rho) {
    for (double r : rho.values)
        if (!(r > 0.0)) throw NonpositiveDensity("density is not positive");
}

/// Integrated quantities of one state.
struct BalanceSample {
    double t = 0.0;
    double mass = 0.0;
    Vec3 momentum = Vec3::Zero();
    Vec3 angular_momentum = Vec3::Zero();
    double total_energy = 0.0;  // integral of rho |v|^2 / 2 + rho e
    double concentration = 0.0;
    double energy_residual = std::numeric_limits<double>::quiet_NaN();
};

inline BalanceSample balance_sample(const FluidState& st, const GridGeometry& geo, const QuadratureRule& rule) {
    const Grid& g = geo.grid;
    ScalarField eA(g, 0.0);
    VectorField p(g, Vec3::Zero()), L(g, Vec3::Zero());
    for (int k = 0; k < geo.size(); ++k) {
        p[k] = st.rho[k] * st.v[k];
        L[k] = geo[k].x.cross(p[k]);
        eA[k] = 0.5 * st.rho[k] * st.v[k].squaredNorm() + st.rho[k] * st.e[k];
    }
    BalanceSample b;
    b.t = st.t;
    b.mass = surface_integral(st.rho, geo, rule);
    b.momentum = surface_integral(p, geo, rule);
    b.angular_momentum = surface_integral(L, geo, rule);
    b.total_energy = surface_integral(eA, geo, rule);
    b.concentration = surface_integral(st.C, geo, rule);
    return b;
}

/// Time series of the conserved and balanced quantities of a run.
struct BalanceReport {
    std::vector<BalanceSample> samples;

    double relative_mass_drift() const {
        if (samples.empty()) return 0.0;
        const double m0 = samples.front().mass;
        double d = 0.0;
        for (const auto& s : samples) d = std::max(d, std::abs(s.mass - m0));
        return d / std::max(std::abs(m0), 1e-300);
    }

    double final_energy_residual() const {
        return samples.empty() ? std::numeric_limits<double>::quiet_NaN() : samples.back().energy_residual;
    }

    /// Largest |energy residual| over the recorded samples (NaN samples skipped).
    double max_energy_residual() const {
        double m = 0.0;
        for (const auto& s : samples)
            if (!std::isnan(s.energy_residual)) m = std::max(m, std::abs(s.energy_residual));
        return m;
    }

    /// Largest |total concentration - initial| over the recorded samples.
    double concentration_drift() const {
        double d = 0.0;
        for (const auto& s : samples) d = std::max(d, std::abs(s.concentration - samples.front().concentration));
        return d;
    }
};

inline const char* balance_csv_header() { return "t,mass,px,py,pz,Lx,Ly,Lz,eA,Ctot,energy_residual"; }

inline void write_balance_csv(std::ostream& os, const BalanceReport& r) {
    os << balance_csv_header() << '\n';
    for (const auto& s : r.samples) {
        os << format_number(s.t) << ',' << format_number(s.mass);
        for (int c = 0; c < 3; ++c) os << ',' << format_number(s.momentum[c]);
        for (int c = 0; c < 3; ++c) os << ',' << format_number(s.angular_momentum[c]);
        os << ',' << format_number(s.total_energy) << ',' << format_number(s.concentration) << ',' << format_number(s.energy_residual)
           << '\n';
    }
}

inline void write_balance_csv(const std::string& path, const BalanceReport& r) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    write_balance_csv(os, r);
}

/// Max-node and quadrature L2 norms of one residual field.
struct ResidualSummary {
    std::string name;
    double h = 0.0;
    double dt = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
};

template <class T>
ResidualSummary summarize(const std::string& name, const GridField<T>& r, const GridGeometry& geo, const QuadratureRule& rule, double dt) {
    ScalarField sq(geo.grid, 0.0);
    double m = 0.0;
    for (int k = 0; k < geo.size(); ++k) {
        double a2;
        if constexpr (std::is_same_v<T, double>) a2 = r[k] * r[k];
        else a2 = r[k].squaredNorm();
        sq[k] = a2;
        m = std::max(m, std::sqrt(a2));
    }
    return {name, geo.grid.h(), dt, m, std::sqrt(std::max(0.0, surface_integral(sq, geo, rule)))};
}

inline const char* residual_csv_header() { return "name,h,dt,linf,l2"; }

inline void write_residual_csv(std::ostream& os, const std::vector<ResidualSummary>& rows) {
    os << residual_csv_header() << '\n';
    for (const auto& r : rows)
        os << r.name << ',' << format_number(r.h) << ',' << format_number(r.dt) << ',' << format_number(r.linf) << ','
           << format_number(r.l2) << '\n';
}

inline void write_residual_csv(const std::string& path, const std::vector<ResidualSummary>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    write_residual_csv(os, rows);
}

/// Composite trapezoid in time of equally spaced samples.
inline double time_trapezoid(const std::vector<double>& y, double dt) {
    if (y.size() < 2) return 0.0;
    std::vector<double> terms(y.size());
    for (std::size_t q = 0; q < y.size(); ++q) terms[q] = (q == 0 || q + 1 == y.size() ? 0.5 : 1.0) * dt * y[q];
    return pairwise_sum(terms);
}

inline Vec3 time_trapezoid(const std::vector<Vec3>& y, double dt) {
    Vec3 out;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> comp(y.size());
        for (std::size_t q = 0; q < y.size(); ++q) comp[q] = y[q][c];
        out[c] = time_trapezoid(comp, dt);
    }
    return out;
}

}  // namespace surfcalc
