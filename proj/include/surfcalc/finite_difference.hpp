#pragma once

#include "surfcalc/types.hpp"

#include <type_traits>

namespace surfcalc {

/// Fourth-order central difference of a smooth function of one real variable.
template <class F>
auto central4(F&& f, double x, double step) {
    using R = std::decay_t<decltype(f(x))>;
    return R((f(x - 2.0 * step) - 8.0 * f(x - step) + 8.0 * f(x + step) - f(x + 2.0 * step)) / (12.0 * step));
}

/// Second-order central difference.
template <class F>
auto central2(F&& f, double x, double step) {
    using R = std::decay_t<decltype(f(x))>;
    return R((f(x + step) - f(x - step)) / (2.0 * step));
}

/// Partial derivative of a closed-form field of (X, t) along parameter axis `axis`.
template <class F>
auto param_partial4(F&& f, const Vec2& x, double t, int axis, double step) {
    return central4(
        [&](double s) {
            Vec2 y = x;
            y[axis] = s;
            return f(y, t);
        },
        x[axis], step);
}

template <class F>
auto time_partial4(F&& f, const Vec2& x, double t, double step) {
    return central4([&](double s) { return f(x, s); }, t, step);
}

}  // namespace surfcalc
