#pragma once

#include "surfcalc/errors.hpp"
#include "surfcalc/finite_difference.hpp"
#include "surfcalc/geometry/domain.hpp"
#include "surfcalc/types.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace surfcalc {

/// Closed-form flow map x(X, t) over a parameter domain. Optional members hold analytic
/// derivatives; when one is empty the evaluators below fall back to finite differences.
struct FlowMapSpec {
    std::string name;
    ParamDomain domain;
    double horizon = std::numeric_limits<double>::infinity();
    bool stationary = false;

    std::function<Vec3(const Vec2&, double)> position;
    std::function<std::array<Vec3, 2>(const Vec2&, double)> tangents;       // dx/dX_a
    std::function<std::array<Vec3, 3>(const Vec2&, double)> second;         // x_11, x_12, x_22
    std::function<Vec3(const Vec2&, double)> velocity;                      // dx/dt
    std::function<std::array<Vec3, 2>(const Vec2&, double)> tangent_rates;  // d2x/dX_a dt
    std::function<Vec3(const Vec2&, double)> acceleration;                  // d2x/dt2

    bool analytic_tangents() const { return static_cast<bool>(tangents); }
    Vec3 reference(const Vec2& x) const { return position(x, 0.0); }
};

/// Steps used whenever a derivative has to be approximated.
struct DerivativeSteps {
    Vec2 param{1e-5, 1e-5};  // for tangents of finite-difference specs
    double time = 1e-5;      // for velocities and metric rates
};

inline std::array<Vec3, 2> tangents_at(const FlowMapSpec& spec, const Vec2& x, double t, const DerivativeSteps& st = {}) {
    if (spec.tangents) return spec.tangents(x, t);
    std::array<Vec3, 2> g;
    for (int a = 0; a < 2; ++a) {
        g[static_cast<std::size_t>(a)] =
            central2([&](double s) {
                Vec2 y = x;
                y[a] = s;
                return Vec3(spec.position(y, t));
            }, x[a], st.param[a]);
    }
    return g;
}

/// Second parameter derivatives. `steps` are the differencing steps along each axis; with
/// analytic tangents the tangents are differenced, otherwise the position.
inline std::array<Vec3, 3> second_at(const FlowMapSpec& spec, const Vec2& x, double t, const Vec2& steps, bool prefer_analytic) {
    if (prefer_analytic && spec.second) return spec.second(x, t);
    auto shifted = [&](int a, double s) {
        Vec2 y = x;
        y[a] += s;
        return y;
    };
    if (spec.tangents) {
        const double h1 = steps[0];
        const double h2 = steps[1];
        const auto p1 = spec.tangents(shifted(0, h1), t);
        const auto m1 = spec.tangents(shifted(0, -h1), t);
        const auto p2 = spec.tangents(shifted(1, h2), t);
        const auto m2 = spec.tangents(shifted(1, -h2), t);
        const Vec3 x11 = (p1[0] - m1[0]) / (2.0 * h1);
        const Vec3 x22 = (p2[1] - m2[1]) / (2.0 * h2);
        const Vec3 x12 = 0.5 * ((p2[0] - m2[0]) / (2.0 * h2) + (p1[1] - m1[1]) / (2.0 * h1));
        return {x11, x12, x22};
    }
    const double h1 = steps[0];
    const double h2 = steps[1];
    const Vec3 c = spec.position(x, t);
    const Vec3 x11 = (spec.position(shifted(0, h1), t) - 2.0 * c + spec.position(shifted(0, -h1), t)) / (h1 * h1);
    const Vec3 x22 = (spec.position(shifted(1, h2), t) - 2.0 * c + spec.position(shifted(1, -h2), t)) / (h2 * h2);
    Vec2 pp = x, pm = x, mp = x, mm = x;
    pp += Vec2(h1, h2);
    pm += Vec2(h1, -h2);
    mp += Vec2(-h1, h2);
    mm += Vec2(-h1, -h2);
    const Vec3 x12 = (spec.position(pp, t) - spec.position(pm, t) - spec.position(mp, t) + spec.position(mm, t)) / (4.0 * h1 * h2);
    return {x11, x12, x22};
}

inline Vec3 velocity_at(const FlowMapSpec& spec, const Vec2& x, double t, const DerivativeSteps& st = {}) {
    if (spec.velocity) return spec.velocity(x, t);
    if (spec.stationary) return Vec3::Zero();
    return central2([&](double s) { return Vec3(spec.position(x, s)); }, t, st.time);
}

inline std::array<Vec3, 2> tangent_rates_at(const FlowMapSpec& spec, const Vec2& x, double t, const DerivativeSteps& st = {}) {
    if (spec.tangent_rates) return spec.tangent_rates(x, t);
    if (spec.stationary) return {Vec3::Zero(), Vec3::Zero()};
    const auto p = tangents_at(spec, x, t + st.time, st);
    const auto m = tangents_at(spec, x, t - st.time, st);
    return {(p[0] - m[0]) / (2.0 * st.time), (p[1] - m[1]) / (2.0 * st.time)};
}

inline Vec3 acceleration_at(const FlowMapSpec& spec, const Vec2& x, double t, const DerivativeSteps& st = {}) {
    if (spec.acceleration) return spec.acceleration(x, t);
    if (spec.stationary) return Vec3::Zero();
    return central2([&](double s) { return velocity_at(spec, x, s, st); }, t, st.time);
}

// ---------------------------------------------------------------------------------------
// Catalog

using ParamMap = std::map<std::string, double>;

struct ParamSchema {
    std::string name;
    double default_value = 0.0;
    std::string description;
};

inline double param_or(const ParamMap& p, const std::string& key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

namespace surfaces {

/// Planar disk (or annulus when inner_radius > 0) in polar parameters, moving rigidly by
/// x0 + t*c and rotating about e_z with angular rate omega.
inline FlowMapSpec planar(const std::string& name, double radius, double inner_radius, Vec3 drift, double omega) {
    FlowMapSpec s;
    s.name = name;
    s.domain = inner_radius > 0.0 ? ParamDomain::annulus_sector(inner_radius, radius) : ParamDomain::disk_polar(radius);
    s.stationary = drift.isZero() && omega == 0.0;
    s.position = [=](const Vec2& x, double t) {
        const double a = x[1] + omega * t;
        return Vec3(Vec3(x[0] * std::cos(a), x[0] * std::sin(a), 0.0) + t * drift);
    };
    s.tangents = [=](const Vec2& x, double t) {
        const double a = x[1] + omega * t;
        const double c = std::cos(a), sn = std::sin(a);
        return std::array<Vec3, 2>{Vec3(c, sn, 0.0), Vec3(-x[0] * sn, x[0] * c, 0.0)};
    };
    s.second = [=](const Vec2& x, double t) {
        const double a = x[1] + omega * t;
        const double c = std::cos(a), sn = std::sin(a);
        return std::array<Vec3, 3>{Vec3::Zero(), Vec3(-sn, c, 0.0), Vec3(-x[0] * c, -x[0] * sn, 0.0)};
    };
    s.velocity = [=](const Vec2& x, double t) {
        const double a = x[1] + omega * t;
        return Vec3(Vec3(-omega * x[0] * std::sin(a), omega * x[0] * std::cos(a), 0.0) + drift);
    };
    s.tangent_rates = [=](const Vec2& x, double t) {
        const double a = x[1] + omega * t;
        const double c = std::cos(a), sn = std::sin(a);
        return std::array<Vec3, 2>{Vec3(-omega * sn, omega * c, 0.0), Vec3(-omega * x[0] * c, -omega * x[0] * sn, 0.0)};
    };
    s.acceleration = [=](const Vec2& x, double t) {
        const double a = x[1] + omega * t;
        return Vec3(-omega * omega * x[0] * std::cos(a), -omega * omega * x[0] * std::sin(a), 0.0);
    };
    return s;
}

inline FlowMapSpec flat_disk(double radius = 1.0, double inner_radius = 0.0) {
    return planar("flat-disk", radius, inner_radius, Vec3::Zero(), 0.0);
}

inline FlowMapSpec translating_disk(double radius, double inner_radius, const Vec3& c) {
    return planar("translating-disk", radius, inner_radius, c, 0.0);
}

inline FlowMapSpec rotating_disk(double radius, double inner_radius, double omega) {
    return planar("rotating-disk", radius, inner_radius, Vec3::Zero(), omega);
}

/// Flat disk whose material circles turn at omega0 + omega1 b(r), b a bump supported in
/// r < core, while the whole disk translates along e_x with acceleration accel. Rigid (and
/// so stress free) in the band core <= r <= radius; area preserving.
inline FlowMapSpec swirling_disk(double radius = 1.0, double omega0 = 0.3, double omega1 = 1.0, double accel = 0.5, double core = 0.8) {
    FlowMapSpec s;
    s.name = "swirling-disk";
    s.domain = ParamDomain::disk_polar(radius);
    s.stationary = omega0 == 0.0 && omega1 == 0.0 && accel == 0.0;
    // b, b', b'' of the profile at r
    auto profile = [core](double r) {
        const double u = r / core, q = 1.0 - u * u;
        if (!(q > 0.0)) return std::array<double, 3>{0.0, 0.0, 0.0};
        const double b = std::exp(1.0 - 1.0 / q);
        const double g1 = -2.0 * u / (q * q);
        const double g2 = -2.0 / (q * q) - 8.0 * u * u / (q * q * q);
        return std::array<double, 3>{b, b * g1 / core, b * (g1 * g1 + g2) / (core * core)};
    };
    auto angle = [=](const Vec2& x, double t) { return x[1] + t * (omega0 + omega1 * profile(x[0])[0]); };
    auto shift = [accel](double t) { return Vec3(0.5 * accel * t * t, 0.0, 0.0); };
    auto radial = [](double a) { return Vec3(std::cos(a), std::sin(a), 0.0); };
    auto turned = [](double a) { return Vec3(-std::sin(a), std::cos(a), 0.0); };
    s.position = [=](const Vec2& x, double t) { return Vec3(shift(t) + x[0] * radial(angle(x, t))); };
    s.tangents = [=](const Vec2& x, double t) {
        const double a = angle(x, t), ar = omega1 * t * profile(x[0])[1];
        return std::array<Vec3, 2>{Vec3(radial(a) + x[0] * ar * turned(a)), Vec3(x[0] * turned(a))};
    };
    s.second = [=](const Vec2& x, double t) {
        const auto b = profile(x[0]);
        const double a = angle(x, t), ar = omega1 * t * b[1], arr = omega1 * t * b[2];
        return std::array<Vec3, 3>{Vec3((2.0 * ar + x[0] * arr) * turned(a) - x[0] * ar * ar * radial(a)),
                                   Vec3(turned(a) - x[0] * ar * radial(a)), Vec3(-x[0] * radial(a))};
    };
    s.velocity = [=](const Vec2& x, double t) {
        const double a = angle(x, t), at = omega0 + omega1 * profile(x[0])[0];
        return Vec3(Vec3(accel * t, 0.0, 0.0) + x[0] * at * turned(a));
    };
    s.tangent_rates = [=](const Vec2& x, double t) {
        const auto b = profile(x[0]);
        const double a = angle(x, t), at = omega0 + omega1 * b[0], ar = omega1 * t * b[1], art = omega1 * b[1];
        return std::array<Vec3, 2>{Vec3((at + x[0] * art) * turned(a) - x[0] * ar * at * radial(a)), Vec3(-x[0] * at * radial(a))};
    };
    s.acceleration = [=](const Vec2& x, double t) {
        const double a = angle(x, t), at = omega0 + omega1 * profile(x[0])[0];
        return Vec3(Vec3(accel, 0.0, 0.0) - x[0] * at * at * radial(a));
    };
    return s;
}

/// Spherical cap of radius R(t) = radius + rate*t in (polar angle, azimuth) parameters.
/// theta_min == 0 gives a cap around the pole (polar parameter axis); otherwise a band.
inline FlowMapSpec sphere_family(const std::string& name, double radius, double rate, double theta_min, double theta_max) {
    FlowMapSpec s;
    s.name = name;
    s.domain = theta_min > 0.0 ? ParamDomain::annulus_sector(theta_min, theta_max) : ParamDomain::disk_polar(theta_max);
    s.stationary = rate == 0.0;
    auto unit = [](const Vec2& x) {
        return Vec3(std::sin(x[0]) * std::cos(x[1]), std::sin(x[0]) * std::sin(x[1]), std::cos(x[0]));
    };
    auto unit_t = [](const Vec2& x) {
        return std::array<Vec3, 2>{
            Vec3(std::cos(x[0]) * std::cos(x[1]), std::cos(x[0]) * std::sin(x[1]), -std::sin(x[0])),
            Vec3(-std::sin(x[0]) * std::sin(x[1]), std::sin(x[0]) * std::cos(x[1]), 0.0)};
    };
    auto r = [=](double t) { return radius + rate * t; };
    s.position = [=](const Vec2& x, double t) { return Vec3(r(t) * unit(x)); };
    s.tangents = [=](const Vec2& x, double t) {
        auto g = unit_t(x);
        return std::array<Vec3, 2>{r(t) * g[0], r(t) * g[1]};
    };
    s.second = [=](const Vec2& x, double t) {
        const double ct = std::cos(x[0]), st = std::sin(x[0]);
        const double cp = std::cos(x[1]), sp = std::sin(x[1]);
        const double rr = r(t);
        return std::array<Vec3, 3>{Vec3(-rr * unit(x)), Vec3(rr * Vec3(-ct * sp, ct * cp, 0.0)),
                                   Vec3(rr * Vec3(-st * cp, -st * sp, 0.0))};
    };
    s.velocity = [=](const Vec2& x, double) { return Vec3(rate * unit(x)); };
    s.tangent_rates = [=](const Vec2& x, double) {
        auto g = unit_t(x);
        return std::array<Vec3, 2>{rate * g[0], rate * g[1]};
    };
    s.acceleration = [](const Vec2&, double) { return Vec3::Zero(); };
    return s;
}

inline FlowMapSpec sphere_cap(double radius = 1.0, double theta_min = 0.0, double theta_max = pi / 2.0) {
    return sphere_family("sphere-cap", radius, 0.0, theta_min, theta_max);
}

inline FlowMapSpec expanding_sphere_cap(double radius = 1.0, double rate = 1.0, double theta_min = 0.0, double theta_max = pi / 2.0) {
    return sphere_family("expanding-sphere-cap", radius, rate, theta_min, theta_max);
}

/// Graph z = f(X, t) over [-L, L]^2 with
/// f = a (sin(X1 + s t) cos(0.7 X2) + 0.5 X1 X2 (1 + s t)).
inline FlowMapSpec graph_surface(double half_width = 1.0, double amplitude = 0.2, double speed = 0.5) {
    FlowMapSpec s;
    s.name = "graph-surface";
    s.domain = ParamDomain::unit_square(-half_width, half_width, -half_width, half_width);
    s.stationary = speed == 0.0;
    const double a = amplitude, w = speed;
    s.position = [=](const Vec2& x, double t) {
        const double f = a * (std::sin(x[0] + w * t) * std::cos(0.7 * x[1]) + 0.5 * x[0] * x[1] * (1.0 + w * t));
        return Vec3(x[0], x[1], f);
    };
    s.tangents = [=](const Vec2& x, double t) {
        const double s1 = std::sin(x[0] + w * t), c1 = std::cos(x[0] + w * t);
        const double s2 = std::sin(0.7 * x[1]), c2 = std::cos(0.7 * x[1]);
        const double f1 = a * (c1 * c2 + 0.5 * x[1] * (1.0 + w * t));
        const double f2 = a * (-0.7 * s1 * s2 + 0.5 * x[0] * (1.0 + w * t));
        return std::array<Vec3, 2>{Vec3(1.0, 0.0, f1), Vec3(0.0, 1.0, f2)};
    };
    s.second = [=](const Vec2& x, double t) {
        const double s1 = std::sin(x[0] + w * t), c1 = std::cos(x[0] + w * t);
        const double s2 = std::sin(0.7 * x[1]), c2 = std::cos(0.7 * x[1]);
        const double f11 = -a * s1 * c2;
        const double f12 = a * (-0.7 * c1 * s2 + 0.5 * (1.0 + w * t));
        const double f22 = -a * 0.49 * s1 * c2;
        return std::array<Vec3, 3>{Vec3(0.0, 0.0, f11), Vec3(0.0, 0.0, f12), Vec3(0.0, 0.0, f22)};
    };
    s.velocity = [=](const Vec2& x, double t) {
        const double c1 = std::cos(x[0] + w * t), c2 = std::cos(0.7 * x[1]);
        return Vec3(0.0, 0.0, a * (w * c1 * c2 + 0.5 * w * x[0] * x[1]));
    };
    s.tangent_rates = [=](const Vec2& x, double t) {
        const double s1 = std::sin(x[0] + w * t), c1 = std::cos(x[0] + w * t);
        const double s2 = std::sin(0.7 * x[1]), c2 = std::cos(0.7 * x[1]);
        return std::array<Vec3, 2>{Vec3(0.0, 0.0, a * (-w * s1 * c2 + 0.5 * w * x[1])),
                                   Vec3(0.0, 0.0, a * (-0.7 * w * c1 * s2 + 0.5 * w * x[0]))};
    };
    s.acceleration = [=](const Vec2& x, double t) {
        return Vec3(0.0, 0.0, -a * w * w * std::sin(x[0] + w * t) * std::cos(0.7 * x[1]));
    };
    return s;
}

/// Drops every analytic derivative so that all geometry goes through finite differences.
inline FlowMapSpec finite_difference_only(FlowMapSpec s) {
    s.tangents = nullptr;
    s.second = nullptr;
    s.velocity = nullptr;
    s.tangent_rates = nullptr;
    s.acceleration = nullptr;
    s.name += "[fd]";
    return s;
}

struct SurfaceEntry {
    std::string name;
    std::string description;
    std::vector<ParamSchema> params;
    std::function<FlowMapSpec(const ParamMap&)> make;
};

inline const std::vector<SurfaceEntry>& catalog() {
    static const std::vector<SurfaceEntry> entries = {
        {"flat-disk",
         "planar unit disk x = (r cos a, r sin a, 0); annulus when inner_radius > 0",
         {{"radius", 1.0, "outer radius"}, {"inner_radius", 0.0, "inner radius (0 = full disk)"}},
         [](const ParamMap& p) { return flat_disk(param_or(p, "radius", 1.0), param_or(p, "inner_radius", 0.0)); }},
        {"translating-disk",
         "flat disk translating rigidly with constant velocity c",
         {{"radius", 1.0, "outer radius"},
          {"inner_radius", 0.0, "inner radius"},
          {"cx", 0.3, "velocity x"},
          {"cy", -0.2, "velocity y"},
          {"cz", 0.0, "velocity z"}},
         [](const ParamMap& p) {
             return translating_disk(param_or(p, "radius", 1.0), param_or(p, "inner_radius", 0.0),
                                     Vec3(param_or(p, "cx", 0.3), param_or(p, "cy", -0.2), param_or(p, "cz", 0.0)));
         }},
        {"rotating-disk",
         "flat disk whose parametrization rotates about e_z (tangential motion)",
         {{"radius", 1.0, "outer radius"}, {"inner_radius", 0.0, "inner radius"}, {"omega", 0.5, "angular rate"}},
         [](const ParamMap& p) {
             return rotating_disk(param_or(p, "radius", 1.0), param_or(p, "inner_radius", 0.0), param_or(p, "omega", 0.5));
         }},
        {"swirling-disk",
         "flat disk with differential rotation inside r < core and an accelerating translation",
         {{"radius", 1.0, "outer radius"},
          {"omega0", 0.3, "rigid angular rate"},
          {"omega1", 1.0, "extra rate at the centre"},
          {"accel", 0.5, "translation acceleration along e_x"},
          {"core", 0.8, "support radius of the differential part"}},
         [](const ParamMap& p) {
             return swirling_disk(param_or(p, "radius", 1.0), param_or(p, "omega0", 0.3), param_or(p, "omega1", 1.0),
                                  param_or(p, "accel", 0.5), param_or(p, "core", 0.8));
         }},
        {"sphere-cap",
         "stationary spherical cap in (polar angle, azimuth); band when theta_min > 0",
         {{"radius", 1.0, "sphere radius"}, {"theta_min", 0.0, "lower polar angle"}, {"theta_max", pi / 2.0, "upper polar angle"}},
         [](const ParamMap& p) {
             return sphere_cap(param_or(p, "radius", 1.0), param_or(p, "theta_min", 0.0), param_or(p, "theta_max", pi / 2.0));
         }},
        {"expanding-sphere-cap",
         "spherical cap of radius R(t) = radius + rate t",
         {{"radius", 1.0, "initial radius"},
          {"rate", 1.0, "dR/dt"},
          {"theta_min", 0.0, "lower polar angle"},
          {"theta_max", pi / 2.0, "upper polar angle"}},
         [](const ParamMap& p) {
             return expanding_sphere_cap(param_or(p, "radius", 1.0), param_or(p, "rate", 1.0), param_or(p, "theta_min", 0.0),
                                         param_or(p, "theta_max", pi / 2.0));
         }},
        {"graph-surface",
         "graph z = a (sin(X1 + s t) cos(0.7 X2) + 0.5 X1 X2 (1 + s t)) over [-L, L]^2",
         {{"half_width", 1.0, "L"}, {"amplitude", 0.2, "a"}, {"speed", 0.5, "s"}},
         [](const ParamMap& p) {
             return graph_surface(param_or(p, "half_width", 1.0), param_or(p, "amplitude", 0.2), param_or(p, "speed", 0.5));
         }},
    };
    return entries;
}

inline const SurfaceEntry* find(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace surfaces
}  // namespace surfcalc
