#pragma once

#include "surfcalc/geometry/flow_map.hpp"
#include "surfcalc/types.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace surfcalc {

/// xoshiro256** 1.0 seeded through splitmix64. Satisfies UniformRandomBitGenerator, but the
/// helpers below avoid std distributions so that streams agree across standard libraries.
class Xoshiro256ss {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256ss(std::uint64_t seed = 0x9E3779B97F4A7C15ull) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            w = z ^ (z >> 31);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

/// exp(1 - 1/(1 - s^2)) for |s| < 1, zero outside: smooth, compactly supported, peak 1.
inline double smooth_bump(double s) {
    const double q = 1.0 - s * s;
    return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

/// Bump in parameter space supported in the inner `fraction` of the domain, so it and all its
/// derivatives vanish in a band along every boundary segment.
inline ParamScalarFn interior_bump(const ParamDomain& d, double fraction = 0.75) {
    const Axis a1 = d.axis(0);
    const Axis a2 = d.axis(1);
    if (a1.kind == AxisKind::Polar) {
        const double r = fraction * a1.hi;
        return [r](const Vec2& x, double) { return smooth_bump(x[0] / r); };
    }
    const double c1 = 0.5 * (a1.lo + a1.hi), w1 = 0.5 * fraction * (a1.hi - a1.lo);
    const double c2 = 0.5 * (a2.lo + a2.hi), w2 = 0.5 * fraction * (a2.hi - a2.lo);
    if (a2.kind == AxisKind::Periodic)
        return [=](const Vec2& x, double) { return smooth_bump((x[0] - c1) / w1); };
    return [=](const Vec2& x, double) { return smooth_bump((x[0] - c1) / w1) * smooth_bump((x[1] - c2) / w2); };
}

/// Smooth factor, positive inside and zero on every boundary segment (but not in a band):
/// a product of normalized quadratics in the bounded coordinates.
inline ParamScalarFn edge_factor(const ParamDomain& d) {
    const Axis a1 = d.axis(0);
    const Axis a2 = d.axis(1);
    auto quad = [](const Axis& a) {
        if (a.kind == AxisKind::Periodic) return std::function<double(double)>([](double) { return 1.0; });
        if (a.kind == AxisKind::Polar) return std::function<double(double)>([r = a.hi](double s) { return 1.0 - (s / r) * (s / r); });
        const double c = 0.5 * (a.lo + a.hi), w = 0.5 * (a.hi - a.lo);
        return std::function<double(double)>([c, w](double s) { return 1.0 - ((s - c) / w) * ((s - c) / w); });
    };
    return [f1 = quad(a1), f2 = quad(a2)](const Vec2& x, double) { return f1(x[0]) * f2(x[1]); };
}

/// Composition with the flow map: f(x(X, t), t).
inline ParamScalarFn pull(const FlowMapSpec& spec, AmbientScalarFn f) {
    return [pos = spec.position, f = std::move(f)](const Vec2& x, double t) { return f(pos(x, t), t); };
}

inline ParamVectorFn pull(const FlowMapSpec& spec, AmbientVectorFn f) {
    return [pos = spec.position, f = std::move(f)](const Vec2& x, double t) { return f(pos(x, t), t); };
}

/// Smooth random scalar sum_k a_k sin(k . x + c_k + w_k t) with |k| <= kmax.
inline AmbientScalarFn random_smooth_scalar(Xoshiro256ss& rng, int terms = 4, double kmax = 1.5, double time_rate = 0.0) {
    struct Mode {
        Vec3 k;
        double a, c, w;
    };
    std::vector<Mode> modes;
    for (int q = 0; q < terms; ++q) {
        Mode m;
        m.k = Vec3(rng.uniform(-kmax, kmax), rng.uniform(-kmax, kmax), rng.uniform(-kmax, kmax));
        m.a = rng.uniform(-1.0, 1.0);
        m.c = rng.uniform(0.0, 2.0 * pi);
        m.w = rng.uniform(-time_rate, time_rate);
        modes.push_back(m);
    }
    return [modes](const Vec3& x, double t) {
        double s = 0.0;
        for (const auto& m : modes) s += m.a * std::sin(m.k.dot(x) + m.c + m.w * t);
        return s;
    };
}

inline AmbientVectorFn random_smooth_vector(Xoshiro256ss& rng, int terms = 4, double kmax = 1.5, double time_rate = 0.0) {
    std::array<AmbientScalarFn, 3> c{random_smooth_scalar(rng, terms, kmax, time_rate),
                                     random_smooth_scalar(rng, terms, kmax, time_rate),
                                     random_smooth_scalar(rng, terms, kmax, time_rate)};
    return [c](const Vec3& x, double t) { return Vec3(c[0](x, t), c[1](x, t), c[2](x, t)); };
}

/// Disk eigenmode roots used by the catalog (first positive zeros).
inline constexpr double bessel_j1_prime_root = 1.8411837813406593;  // J1'
inline constexpr double bessel_j0_prime_root = 3.8317059702075123;  // J0' (= zero of J1)

namespace fields {

struct ScalarEntry {
    std::string name;
    std::string description;
    AmbientScalarFn fn;
};

struct VectorEntry {
    std::string name;
    std::string description;
    AmbientVectorFn fn;
};

/// Closed-form ambient scalar fields. "random" is built from `seed`.
inline std::vector<ScalarEntry> scalar_catalog(std::uint64_t seed = 1) {
    Xoshiro256ss rng(seed);
    return {
        {"zero", "0", [](const Vec3&, double) { return 0.0; }},
        {"one", "1", [](const Vec3&, double) { return 1.0; }},
        {"time", "t", [](const Vec3&, double t) { return t; }},
        {"x1", "x1", [](const Vec3& x, double) { return x[0]; }},
        {"x3", "x3", [](const Vec3& x, double) { return x[2]; }},
        {"radius-squared", "|x|^2", [](const Vec3& x, double) { return x.squaredNorm(); }},
        {"planar-radius-squared", "x1^2 + x2^2", [](const Vec3& x, double) { return x[0] * x[0] + x[1] * x[1]; }},
        {"gaussian", "exp(-|x - x0|^2) with x0 = (0.2, -0.1, 0.3)",
         [](const Vec3& x, double) { return std::exp(-(x - Vec3(0.2, -0.1, 0.3)).squaredNorm()); }},
        {"warm", "1.5 + 0.3 sin(x1 + 0.5 x2) cos(x3) (positive)",
         [](const Vec3& x, double) { return 1.5 + 0.3 * std::sin(x[0] + 0.5 * x[1]) * std::cos(x[2]); }},
        {"pulse", "1 + 0.05 exp(-(x1^2 + x2^2) / 0.05) (positive, flat near a unit rim)",
         [](const Vec3& x, double) { return 1.0 + 0.05 * std::exp(-(x[0] * x[0] + x[1] * x[1]) / 0.05); }},
        {"neumann-mode", "J1(j'11 r) cos(phi) in the x1-x2 plane",
         [](const Vec3& x, double) {
             const double r = std::hypot(x[0], x[1]);
             if (r == 0.0) return 0.0;
             return std::cyl_bessel_j(1.0, bessel_j1_prime_root * r) * x[0] / r;
         }},
        {"radial-mode", "J0(j'01 r) in the x1-x2 plane",
         [](const Vec3& x, double) { return std::cyl_bessel_j(0.0, bessel_j0_prime_root * std::hypot(x[0], x[1])); }},
        {"random", "seeded sum of four sine waves", random_smooth_scalar(rng)},
    };
}

inline std::vector<VectorEntry> vector_catalog(std::uint64_t seed = 1) {
    Xoshiro256ss rng(seed ^ 0x5DEECE66Dull);
    return {
        {"zero", "(0, 0, 0)", [](const Vec3&, double) { return Vec3::Zero().eval(); }},
        {"constant", "(0.3, -0.5, 1)", [](const Vec3&, double) { return Vec3(0.3, -0.5, 1.0); }},
        {"planar-radial", "(x1, x2, 0)", [](const Vec3& x, double) { return Vec3(x[0], x[1], 0.0); }},
        {"rotation", "(-x2, x1, 0)", [](const Vec3& x, double) { return Vec3(-x[1], x[0], 0.0); }},
        {"slow-rotation", "0.2 (-x2, x1, 0)", [](const Vec3& x, double) { return Vec3(-0.2 * x[1], 0.2 * x[0], 0.0); }},
        {"swirl", "(sin x2, cos x1, x1 x2)",
         [](const Vec3& x, double) { return Vec3(std::sin(x[1]), std::cos(x[0]), x[0] * x[1]); }},
        {"random", "seeded smooth random vector field", random_smooth_vector(rng)},
    };
}

inline const ScalarEntry* find_scalar(const std::vector<ScalarEntry>& cat, const std::string& name) {
    for (const auto& e : cat)
        if (e.name == name) return &e;
    return nullptr;
}

inline const VectorEntry* find_vector(const std::vector<VectorEntry>& cat, const std::string& name) {
    for (const auto& e : cat)
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace fields
}  // namespace surfcalc
