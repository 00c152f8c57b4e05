#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "expr.hpp"
#include "jet.hpp"
#include "numerics.hpp"
#include "vec3.hpp"

namespace swallowkit {

struct Point {
    double u = 0.0;
    double v = 0.0;
};

/// A smooth function of (u, v) that can be expanded to any jet order at any point.
using ScalarField = std::function<Jet2(double u, double v, int order)>;
/// A smooth map (u, v) -> R^3, expanded componentwise.
using VectorField = std::function<Vec3j(double u, double v, int order)>;

inline ScalarField to_field(const Expr& e) {
    return [e](double u, double v, int K) { return jet_eval(e, u, v, K); };
}

inline VectorField to_field(const Vec3Expr& e) {
    return [e](double u, double v, int K) { return jet_eval(e, u, v, K); };
}

inline ScalarField constant_field(double c) {
    return [c](double, double, int K) { return Jet2(K, c); };
}

inline VectorField constant_field(const Vec3d& c) {
    return [c](double, double, int K) { return constant_jet(c, K); };
}

inline Vec3d value(const VectorField& f, double u, double v) { return values(f(u, v, 0)); }
inline double value(const ScalarField& f, double u, double v) { return f(u, v, 0).value(); }

/// Restriction of a field to the u-axis, re-expanded as a jet independent of v:
/// g(u, v) := f(u, 0).
inline Vec3j restrict_to_axis(const Vec3j& f_on_axis) {
    const int K = order(f_on_axis);
    Vec3j r = constant_jet({0, 0, 0}, K);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i <= K; ++i) r[c].at(i, 0) = f_on_axis[c](i, 0);
    return r;
}

inline Jet2 restrict_to_axis(const Jet2& f_on_axis) {
    Jet2 r(f_on_axis.order());
    for (int i = 0; i <= f_on_axis.order(); ++i) r.at(i, 0) = f_on_axis(i, 0);
    return r;
}

/// Field of u -> f(u, 0), independent of v.
inline VectorField axis_field(VectorField f) {
    return [f = std::move(f)](double u, double, int K) { return restrict_to_axis(f(u, 0.0, K)); };
}

inline ScalarField axis_field(ScalarField f) {
    return [f = std::move(f)](double u, double, int K) { return restrict_to_axis(f(u, 0.0, K)); };
}

/// Field whose v-dependence is replaced by the u-derivative of a curve:
/// given a v-independent field c(u), returns c'(u).
inline VectorField curve_derivative(VectorField c) {
    return [c = std::move(c)](double u, double, int K) {
        Vec3j d = derivative_u(c(u, 0.0, K + 1));
        return restrict_to_axis(d);
    };
}

/// Precomposition f(U(u,v), V(u,v)) for a coordinate change given by jets.
using CoordinateMap = std::function<std::pair<Jet2, Jet2>(double u, double v, int order)>;

inline VectorField compose(VectorField f, CoordinateMap phi) {
    return [f = std::move(f), phi = std::move(phi)](double u, double v, int K) {
        auto [U, V] = phi(u, v, K);
        const Vec3j outer = f(U.value(), V.value(), K);
        return outer.map([&](const Jet2& c) { return c.compose(U, V); });
    };
}

inline ScalarField compose(ScalarField f, CoordinateMap phi) {
    return [f = std::move(f), phi = std::move(phi)](double u, double v, int K) {
        auto [U, V] = phi(u, v, K);
        return f(U.value(), V.value(), K).compose(U, V);
    };
}

/// gamma(u) = integral_0^u s xi(s) ds for a v-independent field xi, with jets
/// from gamma' = u xi.
inline VectorField primitive_of_u_times(VectorField xi) {
    return [xi = std::move(xi)](double u, double, int K) {
        const Vec3d g0 = integrate<Vec3d>([&](double s) { return s * value(xi, s, 0.0); }, 0.0, u, Vec3d{0, 0, 0}, 4);
        Vec3j r = constant_jet(g0, K);
        if (K == 0) return r;
        const Vec3j x = xi(u, 0.0, K - 1);
        const Jet2 U = Jet2::variable_u(K - 1, u);
        for (int c = 0; c < 3; ++c) {
            const Jet2 ux = U * x[c];
            for (int i = 1; i <= K; ++i) r[c].at(i, 0) = ux(i - 1, 0) / i;
        }
        return r;
    };
}

inline VectorField add(VectorField a, VectorField b) {
    return [a = std::move(a), b = std::move(b)](double u, double v, int K) { return a(u, v, K) + b(u, v, K); };
}

inline VectorField scaled(ScalarField s, VectorField f) {
    return [s = std::move(s), f = std::move(f)](double u, double v, int K) { return s(u, v, K) * f(u, v, K); };
}

inline VectorField scaled(double s, VectorField f) {
    return [s, f = std::move(f)](double u, double v, int K) { return s * f(u, v, K); };
}

inline VectorField cross(VectorField a, VectorField b) {
    return [a = std::move(a), b = std::move(b)](double u, double v, int K) { return cross(a(u, v, K), b(u, v, K)); };
}

/// A vector field with an optional symbolic form kept for printing and
/// closed-form manipulations.
struct SymField {
    VectorField f;
    std::optional<Vec3Expr> expr;

    SymField() = default;
    SymField(VectorField field) : f(std::move(field)) {}  // NOLINT(google-explicit-constructor)
    SymField(const Vec3Expr& e) : f(to_field(e)), expr(e) {}  // NOLINT(google-explicit-constructor)

    Vec3j operator()(double u, double v, int K) const { return f(u, v, K); }
    explicit operator bool() const { return static_cast<bool>(f); }
};

struct SymScalar {
    ScalarField f;
    std::optional<Expr> expr;

    SymScalar() = default;
    SymScalar(ScalarField field) : f(std::move(field)) {}  // NOLINT(google-explicit-constructor)
    SymScalar(const Expr& e) : f(to_field(e)), expr(e) {}  // NOLINT(google-explicit-constructor)
    SymScalar(double c) : SymScalar(Expr(c)) {}  // NOLINT(google-explicit-constructor)

    Jet2 operator()(double u, double v, int K) const { return f(u, v, K); }
};

}  // namespace swallowkit
