#pragma once

#include <cmath>
#include <ostream>

#include "jet.hpp"

namespace swallowkit {

/// Three-component vector over doubles or jets.
template <class T>
struct Vec3 {
    T x{}, y{}, z{};

    Vec3() = default;
    Vec3(T x_, T y_, T z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

    T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    template <class F>
    auto map(F&& f) const -> Vec3<decltype(f(x))> {
        return {f(x), f(y), f(z)};
    }

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend Vec3 operator*(const T& s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend Vec3 operator*(const Vec3& a, const T& s) { return {a.x * s, a.y * s, a.z * s}; }
    friend Vec3 operator/(const Vec3& a, const T& s) { return {a.x / s, a.y / s, a.z / s}; }
};

using Vec3d = Vec3<double>;
using Vec3j = Vec3<Jet2>;

inline Vec3j operator*(double s, const Vec3j& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3j operator*(const Vec3j& a, double s) { return s * a; }
inline Vec3j operator/(const Vec3j& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline Vec3j operator*(const Jet2& s, const Vec3d& a) { return {s * a.x, s * a.y, s * a.z}; }

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
T det(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
    return dot(cross(a, b), c);
}

inline double norm(const Vec3d& a) { return std::sqrt(dot(a, a)); }
inline Jet2 norm(const Vec3j& a) { return sqrt(dot(a, a)); }

inline Vec3d normalized(const Vec3d& a) {
    const double n = norm(a);
    if (n == 0.0) throw DomainError("cannot normalize a zero vector");
    return a / n;
}

inline Vec3d values(const Vec3j& a) { return {a.x.value(), a.y.value(), a.z.value()}; }

inline Vec3j constant_jet(const Vec3d& a, int order) {
    return {Jet2(order, a.x), Jet2(order, a.y), Jet2(order, a.z)};
}

inline Vec3j derivative_u(const Vec3j& a) { return a.map([](const Jet2& c) { return c.derivative_u(); }); }
inline Vec3j derivative_v(const Vec3j& a) { return a.map([](const Jet2& c) { return c.derivative_v(); }); }
inline Vec3j truncated(const Vec3j& a, int k) { return a.map([k](const Jet2& c) { return c.truncated(k); }); }

/// Coefficient (i, j) of each component as a plain vector.
inline Vec3d coefficient(const Vec3j& a, int i, int j) { return {a.x(i, j), a.y(i, j), a.z(i, j)}; }
inline Vec3d partial(const Vec3j& a, int i, int j) { return {a.x.partial(i, j), a.y.partial(i, j), a.z.partial(i, j)}; }

inline int order(const Vec3j& a) { return std::min({a.x.order(), a.y.order(), a.z.order()}); }

inline std::ostream& operator<<(std::ostream& os, const Vec3d& a) {
    return os << '(' << a.x << ", " << a.y << ", " << a.z << ')';
}

}  // namespace swallowkit
