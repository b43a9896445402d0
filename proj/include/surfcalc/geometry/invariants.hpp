#pragma once

#include "surfcalc/geometry/grid_geometry.hpp"
#include "surfcalc/identities/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace surfcalc {

/// Largest violation of each pointwise metric invariant over a grid geometry.
struct GeometryAudit {
    double projection_idempotent = 0.0;  // |P^2 - P|
    double projection_normal = 0.0;      // |P n|
    double projection_trace = 0.0;       // |tr P - 2|
    double inverse_metric = 0.0;         // |g^{-1} g - I|
    double determinant = 0.0;            // |G - |g1 x g2|^2| / G
    double normal_length = 0.0;          // ||n| - 1|
    double conormal_length = 0.0;        // ||nu| - 1| at boundary nodes
    double conormal_normal = 0.0;        // |nu . n| at boundary nodes
    double min_G = std::numeric_limits<double>::infinity();

    double worst() const {
        return std::max({projection_idempotent, projection_normal, projection_trace, inverse_metric, determinant, normal_length,
                         conormal_length, conormal_normal});
    }
};

inline GeometryAudit audit_geometry(const GridGeometry& geo) {
    GeometryAudit a;
    for (int k = 0; k < geo.size(); ++k) {
        const MetricState& m = geo[k];
        a.projection_idempotent = std::max(a.projection_idempotent, (m.P * m.P - m.P).cwiseAbs().maxCoeff());
        a.projection_normal = std::max(a.projection_normal, (m.P * m.n).cwiseAbs().maxCoeff());
        a.projection_trace = std::max(a.projection_trace, std::abs(m.P.trace() - 2.0));
        a.inverse_metric = std::max(a.inverse_metric, (m.ginv * m.g - Mat2::Identity()).cwiseAbs().maxCoeff());
        a.determinant = std::max(a.determinant, std::abs(m.G - m.g1.cross(m.g2).squaredNorm()) / m.G);
        a.normal_length = std::max(a.normal_length, std::abs(m.n.norm() - 1.0));
        a.min_G = std::min(a.min_G, m.G);
    }
    for (const auto& seg : geo.boundary)
        for (const auto& b : seg.nodes) {
            a.conormal_length = std::max(a.conormal_length, std::abs(b.nu.norm() - 1.0));
            a.conormal_normal = std::max(a.conormal_normal, std::abs(b.nu.dot(geo[b.node].n)));
        }
    return a;
}

/// Rows "geometry.<invariant>" with lhs the worst violation over `times`, rhs 0.
inline std::vector<CheckRow> check_geometry_invariants(const FlowMapSpec& spec, int n1, int n2, const std::vector<double>& times) {
    const Grid grid(spec.domain, n1, n2);
    GeometryAudit worst;
    for (double t : times) {
        const GeometryAudit a = audit_geometry(build_geometry(spec, grid, t));
        worst.projection_idempotent = std::max(worst.projection_idempotent, a.projection_idempotent);
        worst.projection_normal = std::max(worst.projection_normal, a.projection_normal);
        worst.projection_trace = std::max(worst.projection_trace, a.projection_trace);
        worst.inverse_metric = std::max(worst.inverse_metric, a.inverse_metric);
        worst.determinant = std::max(worst.determinant, a.determinant);
        worst.normal_length = std::max(worst.normal_length, a.normal_length);
        worst.conormal_length = std::max(worst.conormal_length, a.conormal_length);
        worst.conormal_normal = std::max(worst.conormal_normal, a.conormal_normal);
    }
    const double h = grid.h();
    return {make_row("geometry.projection-idempotent", h, 0.0, worst.projection_idempotent, 0.0),
            make_row("geometry.projection-normal", h, 0.0, worst.projection_normal, 0.0),
            make_row("geometry.projection-trace", h, 0.0, worst.projection_trace, 0.0),
            make_row("geometry.inverse-metric", h, 0.0, worst.inverse_metric, 0.0),
            make_row("geometry.determinant", h, 0.0, worst.determinant, 0.0),
            make_row("geometry.normal-length", h, 0.0, worst.normal_length, 0.0),
            make_row("geometry.conormal-length", h, 0.0, worst.conormal_length, 0.0),
            make_row("geometry.conormal-normal", h, 0.0, worst.conormal_normal, 0.0)};
}

/// Max-node error of the grid mean curvature against a closed form at time t.
inline CheckRow check_mean_curvature(const FlowMapSpec& spec, const std::function<double(const Vec3&, double)>& exact, int n1, int n2,
                                     double t = 0.0, const GeometryOptions& opt = {}) {
    const Grid grid(spec.domain, n1, n2);
    const GridGeometry geo = build_geometry(spec, grid, t, opt);
    double err = 0.0, ref = 0.0;
    for (int k = 0; k < geo.size(); ++k) {
        const double e = exact(geo[k].x, t);
        if (std::abs(geo[k].H - e) > err) {
            err = std::abs(geo[k].H - e);
            ref = e;
        }
    }
    CheckRow r = make_row("mean-curvature", grid.h(), 0.0, ref + err, ref);
    r.abs_residual = err;
    return r;
}

}  // namespace surfcalc
