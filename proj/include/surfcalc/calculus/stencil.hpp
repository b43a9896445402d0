#pragma once

#include "surfcalc/calculus/grid_field.hpp"

#include <utility>
#include <vector>

namespace surfcalc {

enum class StencilOrder { Second = 2, Fourth = 4 };

namespace detail {

/// Whether position p along axis a can be read (directly, by wrap-around or through the pole).
inline bool readable(const Grid& g, int a, int p) {
    switch (g.kind(a)) {
        case AxisKind::Periodic: return true;
        case AxisKind::Polar: return p >= -g.n(a) && p < g.n(a);
        case AxisKind::Bounded: return p >= 0 && p < g.n(a);
    }
    return false;
}

inline int wrap(int p, int n) { return ((p % n) + n) % n; }

}  // namespace detail

/// Value at (i, j) where i may sit behind the pole of a polar axis (the same surface point as
/// node (-i-1, j + n2/2)) and periodic indices wrap. Ambient components need no sign change.
inline int resolve_index(const Grid& g, int i, int j) {
    if (i < 0 && g.kind(0) == AxisKind::Polar) {
        i = -i - 1;
        j += g.n(1) / 2;
    }
    if (g.kind(0) == AxisKind::Periodic) i = detail::wrap(i, g.n(0));
    if (g.kind(1) == AxisKind::Periodic) j = detail::wrap(j, g.n(1));
    return g.index(i, j);
}

template <class T>
const T& value_at(const GridField<T>& f, const Grid& g, int i, int j) {
    return f[resolve_index(g, i, j)];
}

/// d f / d X_a at node (i, j): central in the interior; at bounded edges one-sided of the same
/// order (second order falls back to one-sided three-point stencils).
template <class T>
T param_derivative(const GridField<T>& f, const Grid& g, int i, int j, int a, StencilOrder order = StencilOrder::Second) {
    const double h = g.spacing(a);
    const int p = a == 0 ? i : j;
    auto at = [&](int q) -> const T& { return a == 0 ? value_at(f, g, q, j) : value_at(f, g, i, q); };
    auto ok = [&](int q) { return detail::readable(g, a, q); };
    if (order == StencilOrder::Fourth) {
        if (ok(p - 2) && ok(p + 2)) return T((at(p - 2) - 8.0 * at(p - 1) + 8.0 * at(p + 1) - at(p + 2)) / (12.0 * h));
        // five nodes flush with the edge, fourth order
        const int s = ok(p - 1) && ok(p - 2) ? -1 : 1;
        if (ok(p + 4 * s)) {
            if (!ok(p - s)) return T(double(s) * (-25.0 * at(p) + 48.0 * at(p + s) - 36.0 * at(p + 2 * s) + 16.0 * at(p + 3 * s) - 3.0 * at(p + 4 * s)) / (12.0 * h));
            if (ok(p + 3 * s))
                return T(double(s) * (-3.0 * at(p - s) - 10.0 * at(p) + 18.0 * at(p + s) - 6.0 * at(p + 2 * s) + at(p + 3 * s)) / (12.0 * h));
        }
    }
    if (ok(p - 1) && ok(p + 1)) return T((at(p + 1) - at(p - 1)) / (2.0 * h));
    if (!ok(p - 1)) return T((-3.0 * at(p) + 4.0 * at(p + 1) - at(p + 2)) / (2.0 * h));
    return T((3.0 * at(p) - 4.0 * at(p - 1) + at(p - 2)) / (2.0 * h));
}

/// Node indices and weights of the second-order param_derivative stencil at (i, j).
inline std::vector<std::pair<int, double>> derivative_weights(const Grid& g, int i, int j, int a) {
    const double h = g.spacing(a);
    const int p = a == 0 ? i : j;
    auto node = [&](int q) { return a == 0 ? resolve_index(g, q, j) : resolve_index(g, i, q); };
    auto ok = [&](int q) { return detail::readable(g, a, q); };
    if (ok(p - 1) && ok(p + 1)) return {{node(p + 1), 0.5 / h}, {node(p - 1), -0.5 / h}};
    if (!ok(p - 1)) return {{node(p), -1.5 / h}, {node(p + 1), 2.0 / h}, {node(p + 2), -0.5 / h}};
    return {{node(p), 1.5 / h}, {node(p - 1), -2.0 / h}, {node(p - 2), 0.5 / h}};
}

/// d^2 f / d X_a^2 at a node on a bounded edge of axis a: four-point one-sided, second order.
template <class T>
T one_sided_second(const GridField<T>& f, const Grid& g, int i, int j, int a) {
    const double h = g.spacing(a);
    const int p = a == 0 ? i : j;
    auto at = [&](int q) -> const T& { return a == 0 ? value_at(f, g, q, j) : value_at(f, g, i, q); };
    const int s = detail::readable(g, a, p - 1) ? -1 : 1;
    return T((2.0 * at(p) - 5.0 * at(p + s) + 4.0 * at(p + 2 * s) - at(p + 3 * s)) / (h * h));
}

template <class T>
GridField<T> param_derivative(const GridField<T>& f, const Grid& g, int a, StencilOrder order = StencilOrder::Second) {
    GridField<T> out(g, zero_value<T>());
    for (int i = 0; i < g.n(0); ++i)
        for (int j = 0; j < g.n(1); ++j) out(i, j) = param_derivative(f, g, i, j, a, order);
    return out;
}

}  // namespace surfcalc
