#pragma once

#include "surfcalc/geometry/metric.hpp"

#include <vector>

namespace surfcalc {

struct GeometryOptions {
    double lambda2 = 1e-10;
    /// false: mean curvature from differences of the tangents with the grid spacing as step,
    /// so H carries the same O(h^2) error as every other stencil quantity.
    bool analytic_curvature = false;
    double time_step = 1e-5;
};

struct BoundaryNodeGeometry {
    int node = 0;  // flat grid index
    Vec2 X = Vec2::Zero();
    Vec3 nu = Vec3::Zero();
    double line_element = 0.0;  // |dx/dr|
    double weight = 0.0;        // composite trapezoid weight in the running parameter
};

struct SegmentGeometry {
    BoundarySegment segment;
    std::vector<BoundaryNodeGeometry> nodes;
};

/// Metric data of the surface at one time on every node of a grid.
struct GridGeometry {
    Grid grid;
    double t = 0.0;
    std::vector<MetricState> m;
    std::vector<Vec3> velocity;
    std::vector<Mat2> metric_rate;
    std::vector<SegmentGeometry> boundary;

    int size() const { return grid.size(); }
    const MetricState& operator[](int k) const { return m[static_cast<std::size_t>(k)]; }
};

inline GridGeometry build_geometry(const FlowMapSpec& spec, const Grid& grid, double t, const GeometryOptions& opt = {}) {
    GridGeometry geo;
    geo.grid = grid;
    geo.t = t;
    const int n = grid.size();
    geo.m.resize(static_cast<std::size_t>(n));
    geo.velocity.resize(static_cast<std::size_t>(n));
    geo.metric_rate.resize(static_cast<std::size_t>(n));

    DerivativeSteps steps;
    steps.param = Vec2(grid.spacing(0), grid.spacing(1));
    steps.time = opt.time_step;
    const Vec2 hstep(grid.spacing(0), grid.spacing(1));

    for (int i = 0; i < grid.n(0); ++i) {
        for (int j = 0; j < grid.n(1); ++j) {
            const int k = grid.index(i, j);
            const Vec2 X = grid.node(i, j);
            const auto g = tangents_at(spec, X, t, steps);
            MetricState ms = frame_from_tangents(spec.position(X, t), g[0], g[1], opt.lambda2);
            ms.H = mean_curvature(ms, second_at(spec, X, t, hstep, opt.analytic_curvature));
            geo.m[static_cast<std::size_t>(k)] = ms;
            geo.velocity[static_cast<std::size_t>(k)] = velocity_at(spec, X, t, steps);
            geo.metric_rate[static_cast<std::size_t>(k)] = metric_rate_from(g, tangent_rates_at(spec, X, t, steps));
        }
    }

    for (const auto& seg : grid.domain().segments()) {
        SegmentGeometry sg;
        sg.segment = seg;
        const auto nodes = grid.segment_nodes(seg);
        const int ra = seg.running_axis();
        const double h = grid.spacing(ra);
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const auto [i, j] = nodes[q];
            const int k = grid.index(i, j);
            const auto& ms = geo.m[static_cast<std::size_t>(k)];
            BoundaryNodeGeometry b;
            b.node = k;
            b.X = grid.node(i, j);
            b.nu = conormal_from(ms.g1, ms.g2, seg.outer_normal);
            b.line_element = ms.tangent(ra).norm();
            if (!(b.line_element > 1e-14)) throw DegenerateSegment("vanishing line element on boundary of " + spec.name);
            const bool end = !seg.closed && (q == 0 || q + 1 == nodes.size());
            b.weight = end ? 0.5 * h : h;
            sg.nodes.push_back(b);
        }
        geo.boundary.push_back(std::move(sg));
    }
    return geo;
}

}  // namespace surfcalc
