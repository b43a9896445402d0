#pragma once

#include "surfcalc/calculus/operators.hpp"
#include "surfcalc/errors.hpp"
#include "surfcalc/geometry/grid_geometry.hpp"

#include <cmath>
#include <deque>
#include <memory>
#include <vector>

namespace surfcalc {

/// Geometry of a prescribed surface at the handful of times an explicit step visits.
class GeometryCache {
public:
    GeometryCache(FlowMapSpec spec, Grid grid, GeometryOptions opt = {})
        : spec_(std::move(spec)), grid_(std::move(grid)), opt_(opt) {}

    const FlowMapSpec& spec() const { return spec_; }
    const Grid& grid() const { return grid_; }

    const GridGeometry& at(double t) {
        if (spec_.stationary) {
            if (!stationary_) stationary_ = std::make_shared<GridGeometry>(build_geometry(spec_, grid_, 0.0, opt_));
            return *stationary_;
        }
        for (const auto& g : recent_)
            if (g->t == t) return *g;
        recent_.push_back(std::make_shared<GridGeometry>(build_geometry(spec_, grid_, t, opt_)));
        if (recent_.size() > 6) recent_.pop_front();
        return *recent_.back();
    }

private:
    FlowMapSpec spec_;
    Grid grid_;
    GeometryOptions opt_;
    std::shared_ptr<GridGeometry> stationary_;
    std::deque<std::shared_ptr<GridGeometry>> recent_;
};

/// Ring-wise azimuthal low-pass for grids with a polar axis. Ring i keeps the Fourier modes
/// m <= m_max(i), where m_max(i) is the number of modes whose azimuthal wavelength is not
/// shorter than the radial spacing; m = 0 and m = 1 always pass. Without a pole it is the
/// identity.
class PoleFilter {
public:
    PoleFilter() = default;

    explicit PoleFilter(const GridGeometry& geo) {
        const Grid& g = geo.grid;
        n2_ = g.n(1);
        active_ = g.kind(0) == AxisKind::Polar;
        m_max_.assign(static_cast<std::size_t>(g.n(0)), n2_ / 2);
        if (!active_) return;
        const double h1 = g.spacing(0), h2 = g.spacing(1);
        for (int i = 0; i < g.n(0); ++i) {
            double ratio = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n2_; ++j) {
                const MetricState& m = geo[g.index(i, j)];
                ratio = std::min(ratio, std::sqrt(m.g(1, 1)) * h2 / (std::sqrt(m.g(0, 0)) * h1));
            }
            const double cut = std::floor(0.5 * n2_ * ratio);
            m_max_[static_cast<std::size_t>(i)] = std::min(n2_ / 2, std::max(1, static_cast<int>(std::min(cut, 1e9))));
        }
        cos_.resize(static_cast<std::size_t>(n2_ * (n2_ / 2 + 1)));
        sin_.resize(cos_.size());
        for (int m = 0; m <= n2_ / 2; ++m)
            for (int j = 0; j < n2_; ++j) {
                const double a = 2.0 * pi * m * j / n2_;
                cos_[static_cast<std::size_t>(m * n2_ + j)] = std::cos(a);
                sin_[static_cast<std::size_t>(m * n2_ + j)] = std::sin(a);
            }
    }

    bool active() const { return active_; }
    int cutoff(int ring) const { return m_max_[static_cast<std::size_t>(ring)]; }
    bool filters(int ring) const { return active_ && cutoff(ring) < n2_ / 2; }

    /// Azimuthal spacing seen by the kept modes of a ring, in parameter units.
    double effective_spacing(const Grid& g, int ring) const { return g.spacing(1) * (0.5 * n2_) / cutoff(ring); }

    template <class T>
    void apply(GridField<T>& f) const {
        if (!active_) return;
        std::vector<T> row(static_cast<std::size_t>(n2_));
        for (int i = 0; i < f.n1; ++i) {
            if (!filters(i)) continue;
            const int mm = cutoff(i);
            for (int j = 0; j < n2_; ++j) row[static_cast<std::size_t>(j)] = f(i, j);
            std::vector<T> a(static_cast<std::size_t>(mm + 1), zero_value<T>()), b(a);
            for (int m = 0; m <= mm; ++m)
                for (int j = 0; j < n2_; ++j) {
                    a[static_cast<std::size_t>(m)] += cos_[static_cast<std::size_t>(m * n2_ + j)] * row[static_cast<std::size_t>(j)];
                    b[static_cast<std::size_t>(m)] += sin_[static_cast<std::size_t>(m * n2_ + j)] * row[static_cast<std::size_t>(j)];
                }
            for (int j = 0; j < n2_; ++j) {
                T val = a[0] / static_cast<double>(n2_);
                for (int m = 1; m <= mm; ++m)
                    val += (2.0 / n2_) * (cos_[static_cast<std::size_t>(m * n2_ + j)] * a[static_cast<std::size_t>(m)] +
                                          sin_[static_cast<std::size_t>(m * n2_ + j)] * b[static_cast<std::size_t>(m)]);
                f(i, j) = val;
            }
        }
    }

private:
    bool active_ = false;
    int n2_ = 0;
    std::vector<int> m_max_;
    std::vector<double> cos_, sin_;
};

/// Smallest grid length scale along each axis after filtering: min over nodes of sqrt(g_aa) h_a.
inline double effective_length(const GridGeometry& geo, const PoleFilter& filter) {
    const Grid& g = geo.grid;
    double h = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n(0); ++i)
        for (int j = 0; j < g.n(1); ++j) {
            const MetricState& m = geo[g.index(i, j)];
            const double h2 = filter.active() ? filter.effective_spacing(g, i) : g.spacing(1);
            h = std::min({h, std::sqrt(m.g(0, 0)) * g.spacing(0), std::sqrt(m.g(1, 1)) * h2});
        }
    return h;
}

/// Conservative divergence in parameter space: d_a F^a with face values the average of the two
/// nodes, zero flux through bounded edges and the pole, half control volumes at bounded edges.
/// Summed with the trapezoid node weights it telescopes to zero.
inline ScalarField flux_divergence(const std::array<ScalarField, 2>& flux, const Grid& g) {
    ScalarField out(g, 0.0);
    for (int i = 0; i < g.n(0); ++i)
        for (int j = 0; j < g.n(1); ++j) {
            double total = 0.0;
            for (int a = 0; a < 2; ++a) {
                const auto& F = flux[static_cast<std::size_t>(a)];
                const int p = a == 0 ? i : j;
                const bool lower = g.on_lower_boundary(a, p) || (g.kind(a) == AxisKind::Polar && p == 0);
                const bool upper = g.on_upper_boundary(a, p);
                const int ip = a == 0 ? i + 1 : i, jp = a == 0 ? j : j + 1;
                const int im = a == 0 ? i - 1 : i, jm = a == 0 ? j : j - 1;
                const double fc = F(i, j);
                const double fp = upper ? 0.0 : 0.5 * (fc + value_at(F, g, ip, jp));
                const double fm = lower ? 0.0 : 0.5 * (fc + value_at(F, g, im, jm));
                const double width = (g.on_boundary(a, p) ? 0.5 : 1.0) * g.spacing(a);
                total += (fp - fm) / width;
            }
            out(i, j) = total;
        }
    return out;
}

}  // namespace surfcalc
