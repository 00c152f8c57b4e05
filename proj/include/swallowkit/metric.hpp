#pragma once

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "jet.hpp"
#include "vec3.hpp"

namespace swallowkit {

/// The conformal model R^3(a): metric g_a = rho^2 g_E with rho = 2/(1 + a|x|^2),
/// of constant sectional curvature a on {1 + a|x|^2 > 0}.
struct SpaceForm {
    double a = 0.0;

    bool contains(const Vec3d& p) const { return 1.0 + a * dot(p, p) > 0.0; }

    void require(const Vec3d& p) const {
        if (!contains(p)) {
            std::ostringstream os;
            os << "point " << p << " lies outside the model domain of R^3(" << a << ")";
            throw DomainError(os.str());
        }
    }
};

inline double conformal_factor(const SpaceForm& sf, const Vec3d& p) {
    sf.require(p);
    return 2.0 / (1.0 + sf.a * dot(p, p));
}

inline Jet2 conformal_factor(const SpaceForm& sf, const Vec3j& p) {
    sf.require(values(p));
    return 2.0 / (1.0 + sf.a * dot(p, p));
}

/// Gradient of log(rho), which is -a rho x.
template <class T>
Vec3<T> log_factor_gradient(const SpaceForm& sf, const Vec3<T>& p) {
    const T rho = conformal_factor(sf, p);
    return (-sf.a * rho) * p;
}

template <class T>
T metric(const SpaceForm& sf, const Vec3<T>& p, const Vec3<T>& A, const Vec3<T>& B) {
    const T rho = conformal_factor(sf, p);
    return rho * rho * dot(A, B);
}

template <class T>
T metric_norm(const SpaceForm& sf, const Vec3<T>& p, const Vec3<T>& A) {
    using std::sqrt;
    return sqrt(metric(sf, p, A, A));
}

/// det_g(A, B, C) = vol_g(A, B, C) = rho^3 det_E(A, B, C).
template <class T>
T det_g(const SpaceForm& sf, const Vec3<T>& p, const Vec3<T>& A, const Vec3<T>& B, const Vec3<T>& C) {
    const T rho = conformal_factor(sf, p);
    return rho * rho * rho * det(A, B, C);
}

/// Vector product of g_a: g(A x_g B, C) = det_g(A, B, C).  In coordinates this
/// is rho times the Euclidean cross product.
template <class T>
Vec3<T> cross_g(const SpaceForm& sf, const Vec3<T>& p, const Vec3<T>& A, const Vec3<T>& B) {
    const T rho = conformal_factor(sf, p);
    return rho * cross(A, B);
}

/// Christoffel contraction Gamma(p)(X, Y)^k = Gamma^k_ij X^i Y^j of the
/// conformal metric, with grad sigma = -a rho p.
template <class T>
Vec3<T> christoffel(const SpaceForm& sf, const Vec3<T>& p, const Vec3<T>& X, const Vec3<T>& Y) {
    const Vec3<T> gs = log_factor_gradient(sf, p);
    return dot(Y, gs) * X + dot(X, gs) * Y - dot(X, Y) * gs;
}

/// Christoffel symbols Gamma^k_ij at a point.
inline std::array<std::array<std::array<double, 3>, 3>, 3> christoffel_symbols(const SpaceForm& sf, const Vec3d& p) {
    std::array<std::array<std::array<double, 3>, 3>, 3> G{};
    const Vec3d gs = log_factor_gradient(sf, p);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                G[k][i][j] = (k == i ? gs[j] : 0.0) + (k == j ? gs[i] : 0.0) - (i == j ? gs[k] : 0.0);
    return G;
}

enum class Direction { U, V };

inline Vec3j partial(const Vec3j& f, Direction d) { return d == Direction::U ? derivative_u(f) : derivative_v(f); }

/// Covariant derivative along the map f of a vector field W along f:
/// nabla_d W = dW/dd + Gamma(f)(df/dd, W).  Both inputs are jets at the same
/// base point; the result has one order less.
inline Vec3j covariant_derivative(const SpaceForm& sf, const Vec3j& f, const Vec3j& W, Direction d) {
    const Vec3j dW = partial(W, d);
    const int K = order(dW);
    const Vec3j df = truncated(partial(f, d), K);
    return dW + christoffel(sf, truncated(f, K), df, truncated(W, K));
}

}  // namespace swallowkit
