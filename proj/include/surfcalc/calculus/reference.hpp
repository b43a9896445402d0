#pragma once

#include "surfcalc/calculus/constitutive.hpp"
#include "surfcalc/finite_difference.hpp"
#include "surfcalc/geometry/metric.hpp"

namespace surfcalc {

/// Pointwise surface operators applied to closed-form fields of (X, t). Parameter and time
/// partials use fourth-order differences with a small fixed step, so nested compositions
/// (a divergence of a stress built from a gradient) stay accurate to about 1e-9. Used to
/// build manufactured sources and exact comparison values, never inside the grid stencils.
class Reference {
public:
    explicit Reference(FlowMapSpec spec, double delta = 1e-3) : spec_(std::move(spec)), delta_(delta) {}

    const FlowMapSpec& spec() const { return spec_; }

    MetricState frame(const Vec2& x, double t) const {
        MetricOptions opt;
        opt.lambda2 = 0.0;
        return eval_metric_unchecked(spec_, x, t, opt);
    }

    /// Step along axis a at x; shrinks near a polar pole so stencils never reach it.
    double step(const Vec2& x, int a) const {
        if (spec_.domain.axis(a).kind == AxisKind::Polar) return std::min(delta_, 0.2 * std::abs(x[a]));
        return delta_;
    }

    template <class F>
    auto partial(F&& f, const Vec2& x, double t, int a) const {
        return param_partial4(f, x, t, a, step(x, a));
    }

    template <class F>
    auto rate(F&& f, const Vec2& x, double t) const {
        return time_partial4(f, x, t, delta_);
    }

    Vec3 grad(const ParamScalarFn& f, const Vec2& x, double t) const {
        const MetricState m = frame(x, t);
        return m.up1 * partial(f, x, t, 0) + m.up2 * partial(f, x, t, 1);
    }

    double div(const ParamVectorFn& phi, const Vec2& x, double t) const {
        const MetricState m = frame(x, t);
        return m.up1.dot(partial(phi, x, t, 0)) + m.up2.dot(partial(phi, x, t, 1));
    }

    /// (i, j) = d_j^G v_i.
    Mat3 grad(const ParamVectorFn& v, const Vec2& x, double t) const {
        const MetricState m = frame(x, t);
        return outer(partial(v, x, t, 0), m.up1) + outer(partial(v, x, t, 1), m.up2);
    }

    Vec3 div(const ParamTensorFn& M, const Vec2& x, double t) const {
        const MetricState m = frame(x, t);
        return partial(M, x, t, 0) * m.up1 + partial(M, x, t, 1) * m.up2;
    }

    double laplace(const ParamScalarFn& f, const Vec2& x, double t) const {
        return div(ParamVectorFn([self = *this, f](const Vec2& y, double s) { return self.grad(f, y, s); }), x, t);
    }

    // Closed-form fields built from others.

    ParamVectorFn velocity() const {
        return [spec = spec_](const Vec2& x, double t) { return velocity_at(spec, x, t); };
    }

    ParamVectorFn normal() const {
        return [self = *this](const Vec2& x, double t) { return self.frame(x, t).n; };
    }

    ParamTensorFn stretching(ParamVectorFn v) const {
        return [self = *this, v = std::move(v)](const Vec2& x, double t) {
            const Mat3 P = self.frame(x, t).P;
            return Mat3(P * sym(self.grad(v, x, t)) * P);
        };
    }

    ParamScalarFn divergence(ParamVectorFn v) const {
        return [self = *this, v = std::move(v)](const Vec2& x, double t) { return self.div(v, x, t); };
    }

    ParamVectorFn gradient(ParamScalarFn f) const {
        return [self = *this, f = std::move(f)](const Vec2& x, double t) { return self.grad(f, x, t); };
    }

    /// S(v, sigma) for constitutive set cs.
    ParamTensorFn stress(ParamVectorFn v, ParamScalarFn sigma, const ConstitutiveSet& cs) const {
        return [self = *this, v = std::move(v), sigma = std::move(sigma), cs](const Vec2& x, double t) {
            const MetricState m = self.frame(x, t);
            const Mat3 gv = self.grad(v, x, t);
            const Mat3 D = m.P * sym(gv) * m.P;
            const double d = gv.trace();
            return Mat3(cs.e1().d(ddot(D, D)) * D + cs.e2().d(d * d) * d * m.P - sigma(x, t) * m.P);
        };
    }

    ParamScalarFn dissipation(ParamVectorFn v, const ConstitutiveSet& cs) const {
        return [self = *this, v = std::move(v), cs](const Vec2& x, double t) {
            const MetricState m = self.frame(x, t);
            const Mat3 gv = self.grad(v, x, t);
            const Mat3 D = m.P * sym(gv) * m.P;
            const double d2 = ddot(D, D);
            const double dv = gv.trace();
            return cs.e1().d(d2) * d2 + cs.e2().d(dv * dv) * dv * dv;
        };
    }

    /// Generalized flux e'(|grad f|^2) grad f with e the given density.
    ParamVectorFn flux(ParamScalarFn f, EnergyDensity e) const {
        return [self = *this, f = std::move(f), e = std::move(e)](const Vec2& x, double t) {
            const Vec3 g = self.grad(f, x, t);
            return Vec3(e.d(g.squaredNorm()) * g);
        };
    }

private:
    FlowMapSpec spec_;
    double delta_;
};

}  // namespace surfcalc
