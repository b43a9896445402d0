#pragma once

#include "surfcalc/calculus/grid_field.hpp"
#include "surfcalc/geometry/grid_geometry.hpp"
#include "surfcalc/summation.hpp"

#include <vector>

namespace surfcalc {

enum class InteriorRule { Trapezoid, Simpson };

/// Tensor-product node weights in parameter space; the boundary rule is always the composite
/// trapezoid rule on each segment.
struct QuadratureRule {
    InteriorRule interior = InteriorRule::Trapezoid;
    std::array<std::vector<double>, 2> w;

    double weight(int i, int j) const { return w[0][static_cast<std::size_t>(i)] * w[1][static_cast<std::size_t>(j)]; }
};

namespace detail {

inline std::vector<double> simpson_weights(int n, double h) {
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    const int intervals = n - 1;
    if (intervals < 2) {
        for (auto& x : w) x = 0.5 * h;
        return w;
    }
    int simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (int i = 0; i < simpson_end; i += 2) {
        w[static_cast<std::size_t>(i)] += h / 3.0;
        w[static_cast<std::size_t>(i + 1)] += 4.0 * h / 3.0;
        w[static_cast<std::size_t>(i + 2)] += h / 3.0;
    }
    if (simpson_end != intervals) {  // three-eighths rule on the last three intervals
        const int s = simpson_end;
        w[static_cast<std::size_t>(s)] += 3.0 * h / 8.0;
        w[static_cast<std::size_t>(s + 1)] += 9.0 * h / 8.0;
        w[static_cast<std::size_t>(s + 2)] += 9.0 * h / 8.0;
        w[static_cast<std::size_t>(s + 3)] += 3.0 * h / 8.0;
    }
    return w;
}

}  // namespace detail

/// Weights along one axis.
///
/// On a polar axis node 0 sits half a cell away from the pole, where sqrtG vanishes. The
/// trapezoid variant gives node 0 the whole cell [0, h] (so the weights still sum to the axis
/// length and match the control volumes of the conservative solvers). The Simpson variant
/// integrates the piece [0, h/2] with the odd cubic through the first two nodes.
inline std::vector<double> axis_weights(const Grid& g, int a, InteriorRule rule) {
    const int n = g.n(a);
    const double h = g.spacing(a);
    std::vector<double> w(static_cast<std::size_t>(n), h);
    switch (g.kind(a)) {
        case AxisKind::Periodic: return w;
        case AxisKind::Bounded:
            if (rule == InteriorRule::Simpson) return detail::simpson_weights(n, h);
            w.front() = 0.5 * h;
            w.back() = 0.5 * h;
            return w;
        case AxisKind::Polar:
            if (rule == InteriorRule::Simpson) {
                w = detail::simpson_weights(n, h);
                w[0] += 0.5 * h * 51.0 / 96.0;
                w[1] -= 0.5 * h / 96.0;
                return w;
            }
            w.back() = 0.5 * h;
            return w;
    }
    return w;
}

inline QuadratureRule make_rule(const Grid& g, InteriorRule rule = InteriorRule::Trapezoid) {
    QuadratureRule q;
    q.interior = rule;
    q.w[0] = axis_weights(g, 0, rule);
    q.w[1] = axis_weights(g, 1, rule);
    return q;
}

/// Sum of w f sqrtG over the grid, approximating the integral over the surface.
inline double surface_integral(const ScalarField& f, const GridGeometry& geo, const QuadratureRule& rule) {
    const Grid& g = geo.grid;
    std::vector<double> terms(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.n(0); ++i)
        for (int j = 0; j < g.n(1); ++j) {
            const int k = g.index(i, j);
            terms[static_cast<std::size_t>(k)] = rule.weight(i, j) * f[k] * geo[k].sqrtG;
        }
    return pairwise_sum(terms);
}

inline double surface_integral(const ScalarField& f, const GridGeometry& geo) {
    return surface_integral(f, geo, make_rule(geo.grid));
}

inline Vec3 surface_integral(const VectorField& f, const GridGeometry& geo, const QuadratureRule& rule) {
    Vec3 out;
    for (int c = 0; c < 3; ++c)
        out[c] = surface_integral(map_field<double>(f, [c](const Vec3& x) { return x[c]; }), geo, rule);
    return out;
}

/// Sum of w f over the parameter grid (no area element): integral over U.
inline double parameter_integral(const ScalarField& f, const Grid& g, const QuadratureRule& rule) {
    std::vector<double> terms(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.n(0); ++i)
        for (int j = 0; j < g.n(1); ++j) terms[static_cast<std::size_t>(g.index(i, j))] = rule.weight(i, j) * f(i, j);
    return pairwise_sum(terms);
}

/// Scalar values on the boundary nodes, one vector per segment (corners appear once per
/// segment they close, with that segment's one-sided data).
using BoundaryField = std::vector<std::vector<double>>;

template <class Fn>
BoundaryField sample_boundary(const GridGeometry& geo, Fn&& fn) {
    BoundaryField out;
    for (const auto& seg : geo.boundary) {
        std::vector<double> vals;
        vals.reserve(seg.nodes.size());
        for (const auto& b : seg.nodes) vals.push_back(fn(b));
        out.push_back(std::move(vals));
    }
    return out;
}

inline double segment_integral(const BoundaryField& g, const GridGeometry& geo, std::size_t s) {
    const auto& seg = geo.boundary.at(s);
    if (g.at(s).size() != seg.nodes.size()) throw DomainError("boundary field does not match segment nodes");
    std::vector<double> terms(seg.nodes.size());
    for (std::size_t q = 0; q < seg.nodes.size(); ++q) {
        const auto& b = seg.nodes[q];
        if (!(b.line_element > 1e-14)) throw DegenerateSegment("vanishing line element");
        terms[q] = b.weight * b.line_element * g[s][q];
    }
    return pairwise_sum(terms);
}

inline double boundary_integral(const BoundaryField& g, const GridGeometry& geo) {
    if (g.size() != geo.boundary.size()) throw DomainError("boundary field does not match segments");
    std::vector<double> parts;
    for (std::size_t s = 0; s < geo.boundary.size(); ++s) parts.push_back(segment_integral(g, geo, s));
    return pairwise_sum(parts);
}

}  // namespace surfcalc
