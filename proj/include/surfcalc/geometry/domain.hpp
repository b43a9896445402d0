#pragma once

#include "surfcalc/errors.hpp"
#include "surfcalc/types.hpp"

#include <string>
#include <vector>

namespace surfcalc {

/// How a parameter axis is discretized.
///  - Bounded:  nodes at both ends, both ends lie on the boundary of U.
///  - Periodic: closed axis (an angle), no boundary.
///  - Polar:    radial axis starting at a coordinate pole. Nodes sit at (i + 1/2) h so the
///              pole itself is never a node; the upper end is a boundary.
enum class AxisKind { Bounded, Periodic, Polar };

struct Axis {
    AxisKind kind = AxisKind::Bounded;
    double lo = 0.0;
    double hi = 1.0;
};

enum class DomainKind { UnitSquare, DiskPolar, AnnulusSector };

inline std::string to_string(DomainKind k) {
    switch (k) {
        case DomainKind::UnitSquare: return "unit-square";
        case DomainKind::DiskPolar: return "disk-via-polar";
        case DomainKind::AnnulusSector: return "annulus-sector";
    }
    return "?";
}

/// One piece of the boundary of U: a coordinate line X_fixed = const traversed with the
/// domain on the left. point(r) plays the role of (p_m(r), q_m(r)).
struct BoundarySegment {
    int loop = 0;
    int fixed_axis = 0;
    double fixed_value = 0.0;
    double r_begin = 0.0;
    double r_end = 1.0;
    bool closed = false;  // running axis is periodic: the segment is a closed curve by itself
    Vec2 outer_normal = Vec2::Zero();

    int running_axis() const { return 1 - fixed_axis; }

    Vec2 point(double r) const {
        Vec2 x;
        x[fixed_axis] = fixed_value;
        x[running_axis()] = r;
        return x;
    }

    /// (dp/dr, dq/dr) in traversal direction.
    Vec2 tangent() const {
        Vec2 t = Vec2::Zero();
        t[running_axis()] = r_end >= r_begin ? 1.0 : -1.0;
        return t;
    }

    Vec2 begin() const { return point(r_begin); }
    Vec2 end() const { return point(r_end); }
};

class ParamDomain {
public:
    ParamDomain() = default;
    ParamDomain(DomainKind kind, Axis a1, Axis a2) : kind_(kind), axes_{a1, a2} { validate(); }

    static ParamDomain unit_square(double x_lo = 0.0, double x_hi = 1.0, double y_lo = 0.0, double y_hi = 1.0) {
        return {DomainKind::UnitSquare, {AxisKind::Bounded, x_lo, x_hi}, {AxisKind::Bounded, y_lo, y_hi}};
    }

    /// Full disk (or full cap around a pole) in polar parameters (radius, angle).
    static ParamDomain disk_polar(double radius) {
        return {DomainKind::DiskPolar, {AxisKind::Polar, 0.0, radius}, {AxisKind::Periodic, 0.0, 2.0 * pi}};
    }

    /// Annulus r in [r0, r1]; the angular axis is periodic when it spans a full turn.
    static ParamDomain annulus_sector(double r0, double r1, double phi0 = 0.0, double phi1 = 2.0 * pi) {
        const bool full = std::abs((phi1 - phi0) - 2.0 * pi) < 1e-14;
        return {DomainKind::AnnulusSector,
                {AxisKind::Bounded, r0, r1},
                {full ? AxisKind::Periodic : AxisKind::Bounded, phi0, phi1}};
    }

    DomainKind kind() const { return kind_; }
    const Axis& axis(int a) const { return axes_[static_cast<std::size_t>(a)]; }

    std::vector<BoundarySegment> segments() const {
        std::vector<BoundarySegment> out;
        const Axis& a1 = axes_[0];
        const Axis& a2 = axes_[1];
        const bool b1 = a1.kind != AxisKind::Periodic;  // axis 1 has an upper boundary
        if (a2.kind == AxisKind::Periodic) {
            if (b1) out.push_back({0, 0, a1.hi, a2.lo, a2.hi, true, Vec2(1.0, 0.0)});
            if (a1.kind == AxisKind::Bounded) out.push_back({1, 0, a1.lo, a2.hi, a2.lo, true, Vec2(-1.0, 0.0)});
            return out;
        }
        if (a1.kind == AxisKind::Periodic) {
            out.push_back({0, 1, a2.lo, a1.hi, a1.lo, true, Vec2(0.0, -1.0)});
            out.push_back({1, 1, a2.hi, a1.lo, a1.hi, true, Vec2(0.0, 1.0)});
            return out;
        }
        // Rectangle traversed counter-clockwise: bottom, right, top, left.
        out.push_back({0, 1, a2.lo, a1.lo, a1.hi, false, Vec2(0.0, -1.0)});
        out.push_back({0, 0, a1.hi, a2.lo, a2.hi, false, Vec2(1.0, 0.0)});
        out.push_back({0, 1, a2.hi, a1.hi, a1.lo, false, Vec2(0.0, 1.0)});
        out.push_back({0, 0, a1.lo, a2.hi, a2.lo, false, Vec2(-1.0, 0.0)});
        return out;
    }

    bool contains(const Vec2& x, double tol = 1e-12) const {
        for (int a = 0; a < 2; ++a) {
            const Axis& ax = axes_[static_cast<std::size_t>(a)];
            if (ax.kind == AxisKind::Periodic) continue;
            if (x[a] < ax.lo - tol || x[a] > ax.hi + tol) return false;
        }
        return true;
    }

    /// Segments whose closure contains x.
    std::vector<int> segments_through(const Vec2& x, double tol = 1e-12) const {
        std::vector<int> hits;
        const auto segs = segments();
        for (std::size_t s = 0; s < segs.size(); ++s) {
            const auto& seg = segs[s];
            if (std::abs(x[seg.fixed_axis] - seg.fixed_value) > tol) continue;
            if (!seg.closed) {
                const double lo = std::min(seg.r_begin, seg.r_end);
                const double hi = std::max(seg.r_begin, seg.r_end);
                const double r = x[seg.running_axis()];
                if (r < lo - tol || r > hi + tol) continue;
            }
            hits.push_back(static_cast<int>(s));
        }
        return hits;
    }

private:
    void validate() const {
        for (int a = 0; a < 2; ++a) {
            const Axis& ax = axes_[static_cast<std::size_t>(a)];
            if (!(ax.hi > ax.lo)) throw DomainError("parameter axis has empty range");
        }
        if (axes_[1].kind == AxisKind::Polar) throw DomainError("only the first parameter axis may be polar");
        if (axes_[0].kind == AxisKind::Polar) {
            if (axes_[1].kind != AxisKind::Periodic) throw DomainError("a polar axis needs a periodic partner axis");
            if (axes_[0].lo != 0.0) throw DomainError("a polar axis must start at the pole");
        }
    }

    DomainKind kind_ = DomainKind::UnitSquare;
    std::array<Axis, 2> axes_{};
};

/// Structured tensor-product grid over a parameter domain; node (i, j) has flat index i*n2 + j.
class Grid {
public:
    Grid() = default;
    Grid(ParamDomain domain, int n1, int n2) : domain_(std::move(domain)), n_{n1, n2} {
        for (int a = 0; a < 2; ++a) {
            const Axis& ax = domain_.axis(a);
            const int n = n_[static_cast<std::size_t>(a)];
            const int min_n = ax.kind == AxisKind::Periodic ? 4 : 3;
            if (n < min_n) throw DomainError("grid axis has too few nodes");
        }
        if (domain_.axis(0).kind == AxisKind::Polar && n_[1] % 2 != 0)
            throw DomainError("a polar grid needs an even number of angular nodes");
    }

    const ParamDomain& domain() const { return domain_; }
    int n(int a) const { return n_[static_cast<std::size_t>(a)]; }
    int size() const { return n_[0] * n_[1]; }
    int index(int i, int j) const { return i * n_[1] + j; }

    AxisKind kind(int a) const { return domain_.axis(a).kind; }

    double spacing(int a) const {
        const Axis& ax = domain_.axis(a);
        const double len = ax.hi - ax.lo;
        switch (ax.kind) {
            case AxisKind::Bounded: return len / (n(a) - 1);
            case AxisKind::Periodic: return len / n(a);
            case AxisKind::Polar: return len / (n(a) - 0.5);
        }
        return 0.0;
    }

    double coord(int a, int i) const {
        const Axis& ax = domain_.axis(a);
        const double h = spacing(a);
        if (ax.kind == AxisKind::Polar) return (i + 0.5) * h;
        return ax.lo + i * h;
    }

    Vec2 node(int i, int j) const { return {coord(0, i), coord(1, j)}; }

    /// Largest of the two parameter spacings, used as "h" in convergence tables.
    double h() const { return std::max(spacing(0), spacing(1)); }

    bool on_lower_boundary(int a, int i) const { return kind(a) == AxisKind::Bounded && i == 0; }
    bool on_upper_boundary(int a, int i) const { return kind(a) != AxisKind::Periodic && i == n(a) - 1; }
    bool on_boundary(int a, int i) const { return on_lower_boundary(a, i) || on_upper_boundary(a, i); }
    bool is_boundary_node(int i, int j) const { return on_boundary(0, i) || on_boundary(1, j); }

    /// Grid nodes along a boundary segment in traversal order (both end corners included for
    /// open segments; one full turn for closed segments).
    std::vector<std::pair<int, int>> segment_nodes(const BoundarySegment& seg) const {
        std::vector<std::pair<int, int>> out;
        const int fa = seg.fixed_axis;
        const int ra = seg.running_axis();
        const int fixed_index = std::abs(seg.fixed_value - domain_.axis(fa).lo) < 1e-14 &&
                                        kind(fa) != AxisKind::Polar
                                    ? 0
                                    : n(fa) - 1;
        const int m = n(ra);
        const bool forward = seg.r_end >= seg.r_begin;
        for (int k = 0; k < m; ++k) {
            const int r = seg.closed ? k : (forward ? k : m - 1 - k);
            out.emplace_back(fa == 0 ? fixed_index : r, fa == 0 ? r : fixed_index);
        }
        return out;
    }

private:
    ParamDomain domain_;
    std::array<int, 2> n_{0, 0};
};

}  // namespace surfcalc
