#pragma once

#include "surfcalc/errors.hpp"
#include "surfcalc/geometry/flow_map.hpp"

#include <sstream>

namespace surfcalc {

struct MetricOptions {
    double lambda2 = 1e-10;          // floor for G
    bool analytic_curvature = true;  // use the flow map's second derivatives when available
    Vec2 curvature_step{1e-4, 1e-4};
    DerivativeSteps steps;
};

/// Geometric data at one point of the evolving surface.
struct MetricState {
    Vec3 x = Vec3::Zero();
    Vec3 g1 = Vec3::Zero();
    Vec3 g2 = Vec3::Zero();
    Mat2 g = Mat2::Zero();
    Mat2 ginv = Mat2::Zero();
    double G = 0.0;
    double sqrtG = 0.0;
    Vec3 n = Vec3::Zero();
    Mat3 P = Mat3::Zero();
    double H = 0.0;
    Vec3 up1 = Vec3::Zero();  // dual basis g^1 = g^{1b} g_b
    Vec3 up2 = Vec3::Zero();
    bool has_nu = false;
    Vec3 nu = Vec3::Zero();

    const Vec3& tangent(int a) const { return a == 0 ? g1 : g2; }
    const Vec3& dual(int a) const { return a == 0 ? up1 : up2; }
};

/// First-order part of the metric state (everything except H) from the two tangents.
inline MetricState frame_from_tangents(const Vec3& x, const Vec3& g1, const Vec3& g2, double lambda2) {
    MetricState m;
    m.x = x;
    m.g1 = g1;
    m.g2 = g2;
    m.g << g1.dot(g1), g1.dot(g2), g2.dot(g1), g2.dot(g2);
    m.G = m.g(0, 0) * m.g(1, 1) - m.g(0, 1) * m.g(1, 0);
    if (!(m.G >= lambda2)) {
        std::ostringstream os;
        os << "G = " << m.G << " below floor " << lambda2 << " at x = (" << x.transpose() << ")";
        throw SingularMetric(os.str());
    }
    m.sqrtG = std::sqrt(m.G);
    m.ginv << m.g(1, 1), -m.g(0, 1), -m.g(1, 0), m.g(0, 0);
    m.ginv /= m.G;
    const Vec3 c = g1.cross(g2);
    m.n = c / c.norm();
    m.P = Mat3::Identity() - outer(m.n, m.n);
    m.up1 = m.ginv(0, 0) * g1 + m.ginv(0, 1) * g2;
    m.up2 = m.ginv(1, 0) * g1 + m.ginv(1, 1) * g2;
    return m;
}

inline double mean_curvature(const MetricState& m, const std::array<Vec3, 3>& xx) {
    return m.ginv(0, 0) * m.n.dot(xx[0]) + 2.0 * m.ginv(0, 1) * m.n.dot(xx[1]) + m.ginv(1, 1) * m.n.dot(xx[2]);
}

namespace detail {
inline void check_time(const FlowMapSpec& spec, double t) {
    if (!(t >= 0.0) || !(t < spec.horizon)) throw DomainError("time outside [0, T) of flow map " + spec.name);
}
inline void check_point(const FlowMapSpec& spec, const Vec2& x) {
    if (!spec.domain.contains(x, 1e-10)) throw DomainError("parameter point outside the domain of " + spec.name);
}
}  // namespace detail

inline MetricState eval_metric_unchecked(const FlowMapSpec& spec, const Vec2& x, double t, const MetricOptions& opt = {}) {
    const auto g = tangents_at(spec, x, t, opt.steps);
    MetricState m = frame_from_tangents(spec.position(x, t), g[0], g[1], opt.lambda2);
    m.H = mean_curvature(m, second_at(spec, x, t, opt.curvature_step, opt.analytic_curvature));
    return m;
}

inline MetricState eval_metric(const FlowMapSpec& spec, const Vec2& x, double t, const MetricOptions& opt = {}) {
    detail::check_point(spec, x);
    detail::check_time(spec, t);
    return eval_metric_unchecked(spec, x, t, opt);
}

/// Co-normal from the tangents and the outer normal of the parameter boundary.
inline Vec3 conormal_from(const Vec3& g1, const Vec3& g2, const Vec2& outer_normal) {
    const Vec3 along = outer_normal[0] * g2 - outer_normal[1] * g1;
    const Vec3 c = g1.cross(g2);
    return (along / along.norm()).cross(c / c.norm());
}

/// Co-normal at a point of the given boundary segment (one-sided at corners).
inline Vec3 eval_conormal(const FlowMapSpec& spec, const BoundarySegment& seg, const Vec2& x, double t, const MetricOptions& opt = {}) {
    const auto g = tangents_at(spec, x, t, opt.steps);
    frame_from_tangents(spec.position(x, t), g[0], g[1], opt.lambda2);  // singularity check
    return conormal_from(g[0], g[1], seg.outer_normal);
}

inline Vec3 eval_conormal(const FlowMapSpec& spec, const Vec2& x, double t, const MetricOptions& opt = {}) {
    detail::check_time(spec, t);
    const auto hits = spec.domain.segments_through(x, 1e-10);
    if (hits.empty()) throw DomainError("point is not on the boundary of " + spec.name);
    if (hits.size() > 1) throw CornerNode("boundary point joins two segments; choose a segment");
    return eval_conormal(spec, spec.domain.segments()[static_cast<std::size_t>(hits.front())], x, t, opt);
}

inline Vec3 eval_velocity(const FlowMapSpec& spec, const Vec2& x, double t, const MetricOptions& opt = {}) {
    detail::check_point(spec, x);
    detail::check_time(spec, t);
    return velocity_at(spec, x, t, opt.steps);
}

/// Time derivative of the first fundamental form, d/dt g_ab.
inline Mat2 metric_rate_from(const std::array<Vec3, 2>& g, const std::array<Vec3, 2>& gdot) {
    Mat2 r;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            r(a, b) = gdot[static_cast<std::size_t>(a)].dot(g[static_cast<std::size_t>(b)]) +
                      g[static_cast<std::size_t>(a)].dot(gdot[static_cast<std::size_t>(b)]);
    return r;
}

inline Mat2 metric_rate(const FlowMapSpec& spec, const Vec2& x, double t, const MetricOptions& opt = {}) {
    return metric_rate_from(tangents_at(spec, x, t, opt.steps), tangent_rates_at(spec, x, t, opt.steps));
}

}  // namespace surfcalc
