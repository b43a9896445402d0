#pragma once

#include "surfcalc/calculus/constitutive.hpp"
#include "surfcalc/calculus/stencil.hpp"
#include "surfcalc/geometry/grid_geometry.hpp"

namespace surfcalc {

/// Tangential gradient of a scalar: g^{ab} g_a df/dX_b.
inline VectorField surface_gradient(const ScalarField& f, const GridGeometry& geo, StencilOrder order = StencilOrder::Second) {
    const Grid& g = geo.grid;
    VectorField out(g, Vec3::Zero(), f.units.empty() ? "" : f.units + "/length");
    for (int i = 0; i < g.n(0); ++i) {
        for (int j = 0; j < g.n(1); ++j) {
            const int k = g.index(i, j);
            const double d1 = param_derivative(f, g, i, j, 0, order);
            const double d2 = param_derivative(f, g, i, j, 1, order);
            out[k] = geo[k].up1 * d1 + geo[k].up2 * d2;
        }
    }
    return out;
}

/// Tangential gradient of an ambient vector field, component (i, j) = d_j^G v_i.
inline TensorField surface_gradient(const VectorField& v, const GridGeometry& geo, StencilOrder order = StencilOrder::Second) {
    const Grid& g = geo.grid;
    TensorField out(g, Mat3::Zero());
    for (int i = 0; i < g.n(0); ++i) {
        for (int j = 0; j < g.n(1); ++j) {
            const int k = g.index(i, j);
            const Vec3 d1 = param_derivative(v, g, i, j, 0, order);
            const Vec3 d2 = param_derivative(v, g, i, j, 1, order);
            out[k] = outer(d1, geo[k].up1) + outer(d2, geo[k].up2);
        }
    }
    return out;
}

inline ScalarField surface_divergence(const VectorField& phi, const GridGeometry& geo, StencilOrder order = StencilOrder::Second) {
    const Grid& g = geo.grid;
    ScalarField out(g, 0.0);
    for (int i = 0; i < g.n(0); ++i) {
        for (int j = 0; j < g.n(1); ++j) {
            const int k = g.index(i, j);
            out[k] = geo[k].up1.dot(param_derivative(phi, g, i, j, 0, order)) +
                     geo[k].up2.dot(param_derivative(phi, g, i, j, 1, order));
        }
    }
    return out;
}

/// Row-wise divergence of an ambient tensor field: (div M)_i = sum_j d_j^G M_ij.
inline VectorField surface_divergence(const TensorField& M, const GridGeometry& geo, StencilOrder order = StencilOrder::Second) {
    const Grid& g = geo.grid;
    VectorField out(g, Vec3::Zero());
    for (int i = 0; i < g.n(0); ++i) {
        for (int j = 0; j < g.n(1); ++j) {
            const int k = g.index(i, j);
            out[k] = param_derivative(M, g, i, j, 0, order) * geo[k].up1 + param_derivative(M, g, i, j, 1, order) * geo[k].up2;
        }
    }
    return out;
}

/// Treatment of the flux across bounded edges in the conservative Laplace-Beltrami stencil.
enum class EdgeFlux {
    Extrapolated,  // one-sided expanded form at edge nodes: consistent for any f
    Zero           // half control volume with no flux through the edge (zero co-normal derivative)
};

/// (1/sqrtG) d_a (kappa sqrtG g^{ab} d_b f) with face-centred fluxes in the interior.
inline ScalarField laplace_beltrami(const ScalarField& f, const ScalarField& kappa, const GridGeometry& geo,
                                    EdgeFlux edge = EdgeFlux::Extrapolated) {
    const Grid& g = geo.grid;
    const int n = g.size();
    std::array<ScalarField, 4> c;  // kappa sqrtG g^{ab}: 00, 01, 10, 11
    for (auto& ci : c) ci = ScalarField(g, 0.0);
    for (int k = 0; k < n; ++k) {
        const double w = kappa[k] * geo[k].sqrtG;
        c[0][k] = w * geo[k].ginv(0, 0);
        c[1][k] = w * geo[k].ginv(0, 1);
        c[2][k] = w * geo[k].ginv(1, 0);
        c[3][k] = w * geo[k].ginv(1, 1);
    }
    const std::array<ScalarField, 2> df = {param_derivative(f, g, 0), param_derivative(f, g, 1)};

    // Flux along axis a through the face between (i, j) and its neighbour at +1.
    auto face_flux = [&](int a, int i, int j) {
        const int i2 = a == 0 ? i + 1 : i;
        const int j2 = a == 0 ? j : j + 1;
        const double h = g.spacing(a);
        const auto& caa = c[static_cast<std::size_t>(3 * a)];
        const auto& cab = c[static_cast<std::size_t>(a == 0 ? 1 : 2)];
        const auto& dother = df[static_cast<std::size_t>(1 - a)];
        const double diag = 0.5 * (value_at(caa, g, i, j) + value_at(caa, g, i2, j2)) * (value_at(f, g, i2, j2) - value_at(f, g, i, j)) / h;
        const double mixed = 0.5 * (value_at(cab, g, i, j) + value_at(cab, g, i2, j2)) * 0.5 *
                             (value_at(dother, g, i, j) + value_at(dother, g, i2, j2));
        return diag + mixed;
    };

    ScalarField out(g, 0.0);
    for (int i = 0; i < g.n(0); ++i) {
        for (int j = 0; j < g.n(1); ++j) {
            const int k = g.index(i, j);
            double total = 0.0;
            for (int a = 0; a < 2; ++a) {
                const int p = a == 0 ? i : j;
                const double h = g.spacing(a);
                const bool lower = g.on_lower_boundary(a, p);
                const bool upper = g.on_upper_boundary(a, p);
                if ((lower || upper) && edge == EdgeFlux::Extrapolated) {
                    // expanded form c_ab d_a d_b f + (d_a c_ab) d_b f with one-sided stencils
                    const int b = 1 - a;
                    const auto& caa = c[static_cast<std::size_t>(3 * a)];
                    const auto& cab = c[static_cast<std::size_t>(2 * a + b)];
                    total += caa[k] * one_sided_second(f, g, i, j, a) + param_derivative(caa, g, i, j, a) * df[static_cast<std::size_t>(a)][k] +
                             cab[k] * param_derivative(df[static_cast<std::size_t>(b)], g, i, j, a) +
                             param_derivative(cab, g, i, j, a) * df[static_cast<std::size_t>(b)][k];
                    continue;
                }
                const bool at_pole = g.kind(a) == AxisKind::Polar && p == 0;
                const double fp = upper ? 0.0 : face_flux(a, i, j);
                const double fm = (lower || at_pole) ? 0.0 : face_flux(a, a == 0 ? i - 1 : i, a == 0 ? j : j - 1);
                const double width = (lower || upper) ? 0.5 * h : h;
                total += (fp - fm) / width;
            }
            out[k] = total / geo[k].sqrtG;
        }
    }
    return out;
}

inline ScalarField laplace_beltrami(const ScalarField& f, const GridGeometry& geo, EdgeFlux edge = EdgeFlux::Extrapolated) {
    return laplace_beltrami(f, ScalarField(geo.grid, 1.0), geo, edge);
}

/// D_G(v) = P sym(grad_G v) P.
inline TensorField stretching_from_gradient(const TensorField& grad_v, const GridGeometry& geo) {
    TensorField out(geo.grid, Mat3::Zero(), "1/time");
    for (int k = 0; k < geo.size(); ++k) out[k] = geo[k].P * sym(grad_v[k]) * geo[k].P;
    return out;
}

inline TensorField stretching_tensor(const VectorField& v, const GridGeometry& geo, StencilOrder order = StencilOrder::Second) {
    return stretching_from_gradient(surface_gradient(v, geo, order), geo);
}

/// Pointwise stress from the rate of strain D, the surface divergence and the tension.
inline Mat3 stress_from(const Mat3& D, double div, double sigma, const Mat3& P, const ConstitutiveSet& cs) {
    return cs.e1().d(ddot(D, D)) * D + cs.e2().d(div * div) * div * P - sigma * P;
}

inline double dissipation_from(const Mat3& D, double div, const ConstitutiveSet& cs) {
    const double d2 = ddot(D, D);
    return cs.e1().d(d2) * d2 + cs.e2().d(div * div) * div * div;
}

inline TensorField stress_tensor(const VectorField& v, const ScalarField& sigma, const GridGeometry& geo, const ConstitutiveSet& cs,
                                 StencilOrder order = StencilOrder::Second) {
    const TensorField gv = surface_gradient(v, geo, order);
    TensorField out(geo.grid, Mat3::Zero(), "force/length");
    for (int k = 0; k < geo.size(); ++k) {
        const Mat3 D = geo[k].P * sym(gv[k]) * geo[k].P;
        out[k] = stress_from(D, gv[k].trace(), sigma[k], geo[k].P, cs);
    }
    return out;
}

inline ScalarField dissipation_density(const VectorField& v, const GridGeometry& geo, const ConstitutiveSet& cs,
                                       StencilOrder order = StencilOrder::Second) {
    const TensorField gv = surface_gradient(v, geo, order);
    ScalarField out(geo.grid, 0.0, "power/area");
    for (int k = 0; k < geo.size(); ++k) {
        const Mat3 D = geo[k].P * sym(gv[k]) * geo[k].P;
        out[k] = dissipation_from(D, gv[k].trace(), cs);
    }
    return out;
}

/// Sample helpers.
inline ScalarField sample_scalar(const GridGeometry& geo, const AmbientScalarFn& f, std::string units = {}) {
    return make_field<double>(geo.grid, [&](int k) { return f(geo[k].x, geo.t); }, std::move(units));
}

inline VectorField sample_vector(const GridGeometry& geo, const AmbientVectorFn& f, std::string units = {}) {
    return make_field<Vec3>(geo.grid, [&](int k) { return f(geo[k].x, geo.t); }, std::move(units));
}

inline VectorField velocity_field(const GridGeometry& geo) {
    return make_field<Vec3>(geo.grid, [&](int k) { return geo.velocity[static_cast<std::size_t>(k)]; }, "length/time");
}

inline VectorField normal_field(const GridGeometry& geo) {
    return make_field<Vec3>(geo.grid, [&](int k) { return geo[k].n; });
}

}  // namespace surfcalc
