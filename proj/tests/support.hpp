#pragma once

#include "surfcalc/geometry/grid_geometry.hpp"
#include "surfcalc/identities/report.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace surfcalc::test {

/// Flat square patch x = (X1, X2, 0) over [-1, 1]^2.
inline FlowMapSpec flat_square() {
    FlowMapSpec s = surfaces::graph_surface(1.0, 0.0, 0.0);
    s.name = "flat-square";
    return s;
}

/// Polar grids get twice as many azimuthal nodes.
inline Grid grid_for(const FlowMapSpec& spec, int n) {
    const int n2 = spec.domain.kind() == DomainKind::DiskPolar ? 2 * n : n;
    return Grid(spec.domain, n, n2);
}

inline bool interior(const Grid& g, int k) { return !g.is_boundary_node(k / g.n(1), k % g.n(1)); }

/// Observed orders of successive error pairs.
inline std::vector<double> orders(const std::vector<double>& err, const std::vector<double>& h) {
    return observed_orders(err, h);
}

inline double min_order(const std::vector<double>& err, const std::vector<double>& h) {
    double m = INFINITY;
    for (double o : observed_orders(err, h)) m = std::min(m, o);
    return m;
}

/// "e0 e1 e2 | p1 p2" for failure messages.
inline std::string describe(const std::vector<double>& err, const std::vector<double>& h) {
    std::ostringstream os;
    for (double e : err) os << e << ' ';
    os << '|';
    for (double o : observed_orders(err, h)) os << ' ' << o;
    return os.str();
}

/// Max-node error of a scalar field against a closed form, optionally skipping boundary nodes.
template <class Field, class Exact>
double max_error(const Field& f, const GridGeometry& geo, Exact&& exact, bool skip_boundary = false) {
    double e = 0.0;
    for (int k = 0; k < geo.size(); ++k) {
        if (skip_boundary && !interior(geo.grid, k)) continue;
        e = std::max(e, max_abs(f[k] - exact(geo[k], k)));
    }
    return e;
}

}  // namespace surfcalc::test
