#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace surfcalc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double pi = std::numbers::pi;

// Closed-form fields of (parameter point, time).
using ParamScalarFn = std::function<double(const Vec2&, double)>;
using ParamVectorFn = std::function<Vec3(const Vec2&, double)>;
using ParamTensorFn = std::function<Mat3(const Vec2&, double)>;

// Closed-form fields of (ambient point, time).
using AmbientScalarFn = std::function<double(const Vec3&, double)>;
using AmbientVectorFn = std::function<Vec3(const Vec3&, double)>;

inline Mat3 outer(const Vec3& a, const Vec3& b) { return a * b.transpose(); }

inline Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }

/// Frobenius product A:B.
inline double ddot(const Mat3& a, const Mat3& b) { return (a.array() * b.array()).sum(); }

template <class T>
T zero_value() {
    if constexpr (std::is_same_v<T, double>) {
        return 0.0;
    } else {
        return T::Zero();
    }
}

template <class T>
double max_abs(const T& x) {
    if constexpr (std::is_same_v<T, double>) {
        return std::abs(x);
    } else {
        return x.cwiseAbs().maxCoeff();
    }
}

}  // namespace surfcalc
