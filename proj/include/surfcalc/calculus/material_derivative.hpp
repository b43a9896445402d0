#pragma once

#include "surfcalc/calculus/operators.hpp"
#include "surfcalc/errors.hpp"

#include <optional>
#include <vector>

namespace surfcalc {

enum class MaterialVariant {
    Full,        // D_t: derivative along trajectories
    Tangential,  // D_t^G = D_t - (v.n)(n.grad) f
    Normal       // D_t^N = D_t - (v.grad_G) f
};

/// Lagrangian rate of sampled values f(x(X, t_k), t_k) at the middle level: central difference
/// of the two neighbours. Levels are equally spaced by dt; an odd count of at least three.
template <class T>
GridField<T> lagrangian_rate(const std::vector<GridField<T>>& levels, double dt) {
    if (levels.size() < 3) throw InsufficientTimeLevels("material derivative needs at least 3 time levels");
    if (levels.size() % 2 == 0) throw InsufficientTimeLevels("material derivative needs an odd number of time levels");
    const std::size_t c = levels.size() / 2;
    const auto& fp = levels[c + 1];
    const auto& fm = levels[c - 1];
    GridField<T> out = fp;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = T((fp.values[k] - fm.values[k]) / (2.0 * dt));
    return out;
}

/// Material derivative of a scalar at the middle level. `normal_derivative` holds (n.grad) f of
/// the ambient extension; when absent the extension is taken constant along n.
inline ScalarField material_derivative(const std::vector<ScalarField>& levels, double dt, const GridGeometry& geo, MaterialVariant variant,
                                       const std::optional<ScalarField>& normal_derivative = std::nullopt) {
    ScalarField dtf = lagrangian_rate(levels, dt);
    if (variant == MaterialVariant::Full) return dtf;
    const std::size_t c = levels.size() / 2;
    if (variant == MaterialVariant::Normal) {
        const VectorField g = surface_gradient(levels[c], geo);
        for (int k = 0; k < geo.size(); ++k) dtf[k] -= geo.velocity[static_cast<std::size_t>(k)].dot(g[k]);
        return dtf;
    }
    if (normal_derivative)
        for (int k = 0; k < geo.size(); ++k) dtf[k] -= geo.velocity[static_cast<std::size_t>(k)].dot(geo[k].n) * (*normal_derivative)[k];
    return dtf;
}

/// Vector version, componentwise.
inline VectorField material_derivative(const std::vector<VectorField>& levels, double dt, const GridGeometry& geo, MaterialVariant variant,
                                       const std::optional<VectorField>& normal_derivative = std::nullopt) {
    VectorField dtf = lagrangian_rate(levels, dt);
    if (variant == MaterialVariant::Full) return dtf;
    const std::size_t c = levels.size() / 2;
    if (variant == MaterialVariant::Normal) {
        const TensorField g = surface_gradient(levels[c], geo);
        for (int k = 0; k < geo.size(); ++k) dtf[k] -= g[k] * geo.velocity[static_cast<std::size_t>(k)];
        return dtf;
    }
    if (normal_derivative)
        for (int k = 0; k < geo.size(); ++k) dtf[k] -= geo.velocity[static_cast<std::size_t>(k)].dot(geo[k].n) * (*normal_derivative)[k];
    return dtf;
}

}  // namespace surfcalc
