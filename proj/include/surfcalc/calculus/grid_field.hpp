#pragma once

#include "surfcalc/geometry/domain.hpp"
#include "surfcalc/types.hpp"

#include <string>
#include <vector>

namespace surfcalc {

enum class FieldRank { Scalar, Vector, Tensor };

template <class T>
constexpr FieldRank rank_of() {
    if constexpr (std::is_same_v<T, double>) return FieldRank::Scalar;
    else if constexpr (std::is_same_v<T, Vec3>) return FieldRank::Vector;
    else return FieldRank::Tensor;
}

/// Values of a scalar, ambient 3-vector or ambient 3x3 tensor at every node of a grid.
template <class T>
struct GridField {
    int n1 = 0;
    int n2 = 0;
    std::vector<T> values;
    std::string units;

    GridField() = default;
    explicit GridField(const Grid& g, T init = zero_value<T>(), std::string u = {})
        : n1(g.n(0)), n2(g.n(1)), values(static_cast<std::size_t>(g.size()), init), units(std::move(u)) {}

    static constexpr FieldRank rank = rank_of<T>();

    int size() const { return n1 * n2; }
    bool matches(const Grid& g) const { return n1 == g.n(0) && n2 == g.n(1); }

    T& operator[](int k) { return values[static_cast<std::size_t>(k)]; }
    const T& operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
    T& operator()(int i, int j) { return values[static_cast<std::size_t>(i * n2 + j)]; }
    const T& operator()(int i, int j) const { return values[static_cast<std::size_t>(i * n2 + j)]; }
};

using ScalarField = GridField<double>;
using VectorField = GridField<Vec3>;
using TensorField = GridField<Mat3>;

/// Field whose value at node k is fn(k).
template <class T, class Fn>
GridField<T> make_field(const Grid& g, Fn&& fn, std::string units = {}) {
    GridField<T> f(g, zero_value<T>(), std::move(units));
    for (int k = 0; k < g.size(); ++k) f[k] = fn(k);
    return f;
}

template <class R, class T, class Fn>
GridField<R> map_field(const GridField<T>& a, Fn&& fn) {
    GridField<R> out;
    out.n1 = a.n1;
    out.n2 = a.n2;
    out.values.resize(a.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k) out.values[k] = fn(a.values[k]);
    return out;
}

template <class R, class A, class B, class Fn>
GridField<R> zip_field(const GridField<A>& a, const GridField<B>& b, Fn&& fn) {
    GridField<R> out;
    out.n1 = a.n1;
    out.n2 = a.n2;
    out.values.resize(a.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k) out.values[k] = fn(a.values[k], b.values[k]);
    return out;
}

template <class T>
double max_norm(const GridField<T>& f) {
    double m = 0.0;
    for (const auto& x : f.values) m = std::max(m, max_abs(x));
    return m;
}

}  // namespace surfcalc
