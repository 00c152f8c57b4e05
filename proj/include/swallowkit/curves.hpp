#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Geometry>

#include "errors.hpp"
#include "expr.hpp"
#include "field.hpp"
#include "numerics.hpp"
#include "sign.hpp"
#include "vec3.hpp"

namespace swallowkit {

/// A curve germ gamma(u) around u = 0.  The field is independent of v.
struct CurveGerm {
    SymField gamma;
    double lo = -1.0;
    double hi = 1.0;
};

/// gamma'(u) = u xi(u).
struct CuspFactorization {
    SymField xi;
};

enum class CuspKind { NotACusp, NonGenericCusp, GenericCusp };
enum class Handedness { None, Right, Left };

struct CuspClass {
    CuspKind kind = CuspKind::NotACusp;
    Handedness handedness = Handedness::None;
    double cross_norm = 0.0;  // |xi(0) x xi'(0)|
    double determinant = 0.0; // det(xi, xi', xi'')(0)
    Sign determinant_sign = Sign::Zero;
};

inline const char* to_string(CuspKind k) {
    switch (k) {
        case CuspKind::NotACusp: return "not-a-cusp";
        case CuspKind::NonGenericCusp: return "non-generic-cusp";
        case CuspKind::GenericCusp: return "generic-cusp";
    }
    return "";
}

inline const char* to_string(Handedness h) {
    switch (h) {
        case Handedness::None: return "none";
        case Handedness::Right: return "right";
        case Handedness::Left: return "left";
    }
    return "";
}

/// Coefficients of a v-independent jet re-expanded about u0 + du.
inline Jet2 shift_u(const Jet2& j, double du, int K) {
    const int n = j.order();
    Jet2 r(K);
    for (int k = 0; k <= n; ++k) {
        const double c = j(k, 0);
        if (c == 0.0) continue;
        // c (du + d)^k = sum_m C(k,m) du^{k-m} d^m
        double binom = 1.0;
        for (int m = 0; m <= k; ++m) {
            if (m <= K) r.at(m, 0) += c * binom * std::pow(du, k - m);
            binom = binom * (k - m) / (m + 1);
        }
    }
    return r;
}

namespace detail {

/// xi(u) = c'(u)/u from a v-independent field c' (the derivative), robust at
/// and near u = 0.
inline Vec3j divide_curve_by_u(const VectorField& derivative, double u, int K) {
    constexpr double near_zero = 1e-3;
    if (std::abs(u) >= near_zero) {
        const Vec3j d = derivative(u, 0.0, K);
        const Jet2 U = Jet2::variable_u(K, u);
        return d.map([&](const Jet2& c) { return restrict_to_axis(c / U); });
    }
    const int extra = 8;
    const Vec3j d0 = derivative(0.0, 0.0, std::min(K + extra, kMaxJetOrder - 1));
    if (norm(values(d0)) > 1e-10 * (1.0 + norm(partial(d0, 1, 0))))
        throw PreconditionError("gamma'(0) is not zero: not a singular curve point");
    Vec3j r;
    for (int c = 0; c < 3; ++c) {
        Jet2 q(d0[c].order() - 1);
        for (int i = 0; i < d0[c].order(); ++i) q.at(i, 0) = d0[c](i + 1, 0);
        r[c] = shift_u(q, u, K);
    }
    return r;
}

inline std::optional<Vec3Expr> polynomial_factor(const Vec3Expr& gamma) {
    Vec3Expr xi;
    for (int c = 0; c < 3; ++c) {
        auto p = to_polynomial(gamma[c]);
        if (!p) return std::nullopt;
        Polynomial q;
        for (const auto& [k, coef] : pruned(*p)) {
            if (k.second != 0) return std::nullopt;
            if (k.first == 0) continue;
            if (k.first == 1) {
                if (std::abs(coef) > 1e-10) throw PreconditionError("gamma'(0) is not zero: not a singular curve point");
                continue;
            }
            q[{k.first - 2, 0}] += coef * k.first;
        }
        xi[c] = from_polynomial(q);
    }
    return xi;
}

}  // namespace detail

/// Factor gamma'(u) = u xi(u).
inline CuspFactorization factor_cusp(const CurveGerm& c) {
    const Vec3d d0 = values(derivative_u(c.gamma(0.0, 0.0, 1)));
    if (norm(d0) > 1e-10) throw PreconditionError("gamma'(0) is not zero: not a singular curve point");
    if (c.gamma.expr) {
        if (auto xi = detail::polynomial_factor(*c.gamma.expr)) return {SymField(*xi)};
    }
    VectorField deriv = curve_derivative(c.gamma.f);
    return {SymField(VectorField([deriv](double u, double, int K) { return detail::divide_curve_by_u(deriv, u, K); }))};
}

/// The curve gamma(u) = integral_0^u s xi(s) ds of a cusp direction field, in
/// closed form when xi is a polynomial in u.
inline SymField cusp_curve(const SymField& xi) {
    if (xi.expr) {
        Vec3Expr g;
        bool ok = true;
        for (int c = 0; c < 3 && ok; ++c) {
            auto p = to_polynomial((*xi.expr)[c]);
            if (!p) { ok = false; break; }
            Polynomial q;
            for (const auto& [k, coef] : pruned(*p)) {
                if (k.second != 0) { ok = false; break; }
                q[{k.first + 2, 0}] += coef / (k.first + 2);
            }
            g[c] = from_polynomial(q);
        }
        if (ok) return SymField(g);
    }
    return SymField(primitive_of_u_times(xi.f));
}

inline CuspClass classify_cusp(const CuspFactorization& x, SignTolerance tol = {}) {
    const Vec3j j = x.xi(0.0, 0.0, 2);
    const Vec3d xi0 = coefficient(j, 0, 0), xi1 = coefficient(j, 1, 0), xi2 = 2.0 * coefficient(j, 2, 0);
    CuspClass c;
    c.cross_norm = norm(cross(xi0, xi1));
    c.determinant = det(xi0, xi1, xi2);
    const double scale = norm(xi0) * norm(xi1);
    if (classify_sign(c.cross_norm, scale, tol) != Sign::Positive) {
        c.kind = CuspKind::NotACusp;
        return c;
    }
    c.determinant_sign = classify_sign(c.determinant, scale * norm(xi2), tol);
    switch (c.determinant_sign) {
        case Sign::Zero: c.kind = CuspKind::NonGenericCusp; break;
        case Sign::Positive:
            c.kind = CuspKind::GenericCusp;
            c.handedness = Handedness::Right;
            break;
        case Sign::Negative:
            c.kind = CuspKind::GenericCusp;
            c.handedness = Handedness::Left;
            break;
        case Sign::Indeterminate:
            throw IndeterminateSign("det(xi, xi', xi'')(0) = " + std::to_string(c.determinant) +
                                    " lies in the tolerance band");
    }
    return c;
}

/// xi of gamma(-u) is xi(-u); xi of -gamma is -xi.
inline CuspFactorization reflect_parameter(const CuspFactorization& x) {
    if (x.xi.expr) return {SymField(substitute(*x.xi.expr, -Expr::u(), Expr::v()))};
    VectorField f = x.xi.f;
    return {SymField(VectorField([f](double u, double v, int K) {
        Vec3j r = f(-u, v, K);
        for (int c = 0; c < 3; ++c)
            for (int i = 1; i <= K; i += 2)
                for (int j = 0; i + j <= K; ++j) r[c].at(i, j) = -r[c](i, j);
        return r;
    }))};
}

inline CuspFactorization negate(const CuspFactorization& x) {
    if (x.xi.expr) return {SymField(Vec3Expr{-x.xi.expr->x, -x.xi.expr->y, -x.xi.expr->z})};
    return {SymField(scaled(-1.0, x.xi.f))};
}

struct MirrorReport {
    CuspClass original;
    CuspClass reflected_parameter;  // gamma(-u)
    CuspClass negated;              // -gamma(u)
};

inline MirrorReport mirror_properties(const CuspFactorization& x, SignTolerance tol = {}) {
    return {classify_cusp(x, tol), classify_cusp(reflect_parameter(x), tol), classify_cusp(negate(x), tol)};
}

/// A reparametrization u -> t(u) of the source line, with exact jets.
struct CurveReparametrization {
    ScalarField t_of_u;
};

namespace detail {

/// psi(t) = integral_0^1 s |xi(ts)| ds as a jet in t at t0.
inline Jet2 half_arclength_psi(const VectorField& xi, double t0, int K) {
    auto integrand = [&](double s) {
        const Jet2 n = restrict_to_axis(norm(xi(t0 * s, 0.0, K)));
        Jet2 r(K);
        double sk = s;
        for (int k = 0; k <= K; ++k) {
            r.at(k, 0) = sk * n(k, 0);
            sk *= s;
        }
        return r;
    };
    return integrate<Jet2>(integrand, 0.0, 1.0, Jet2(K), 2);
}

/// u(t) = t sqrt(2 psi(t)) as a jet in t at t0.
inline Jet2 half_arclength_u(const VectorField& xi, double t0, int K) {
    return restrict_to_axis(Jet2::variable_u(K, t0) * sqrt(2.0 * half_arclength_psi(xi, t0, K)));
}

/// Inverse series t(u) at u0 given the forward jet u(t) at t0 (u(t0) = u0).
inline Jet2 revert_series(const Jet2& forward, double t0, int K) {
    const double a1 = forward(1, 0);
    if (a1 == 0.0) throw DomainError("reparametrization is not invertible");
    std::vector<double> d(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) d[static_cast<std::size_t>(k)] = forward(k, 0);
    const Jet2 U = Jet2::variable_u(K, forward.value());
    Jet2 T = Jet2(K, t0);
    for (int it = 0; it <= K + 1; ++it) T = T + (U - T.compose_series(d)) / a1;
    return restrict_to_axis(T);
}

}  // namespace detail

struct NormalizedCurve {
    CurveGerm curve;               // gamma-hat(u) = gamma(t(u))
    CuspFactorization factor;      // xi-hat with |xi-hat| = 1
    CurveReparametrization param;  // t(u)
};

/// Half-arclength reparametrization: d gamma-hat/du = u xi-hat(u), |xi-hat| = 1.
inline NormalizedCurve normalize_half_arclength(const CurveGerm& c, const CuspFactorization& x) {
    const Vec3d xi0 = value(x.xi.f, 0.0, 0.0);
    if (norm(xi0) <= 1e-10) throw PreconditionError("gamma''(0) = 0: not a generalized space-cusp");
    VectorField xi = x.xi.f;
    auto solve_t = [xi, xi0](double u) {
        double t = u / std::sqrt(norm(xi0));
        for (int it = 0; it < 50; ++it) {
            const Jet2 f = detail::half_arclength_u(xi, t, 1);
            const double step = (f.value() - u) / f(1, 0);
            t -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(t))) break;
        }
        return t;
    };
    ScalarField t_of_u = [xi, solve_t](double u, double, int K) {
        const double t0 = solve_t(u);
        const int Kc = std::max(K, 1);
        return detail::revert_series(detail::half_arclength_u(xi, t0, Kc), t0, Kc).truncated(K);
    };
    VectorField gamma = c.gamma.f;
    VectorField gamma_hat = [gamma, t_of_u](double u, double, int K) {
        const Jet2 T = t_of_u(u, 0.0, K);
        const Jet2 V = Jet2::variable_v(K, 0.0);
        return gamma(T.value(), 0.0, K).map([&](const Jet2& g) { return g.compose(T, V); });
    };
    VectorField xi_hat = [xi, t_of_u](double u, double, int K) {
        const Jet2 T = t_of_u(u, 0.0, K);
        const Jet2 V = Jet2::variable_v(K, 0.0);
        const Vec3j composed = xi(T.value(), 0.0, K).map([&](const Jet2& g) { return g.compose(T, V); });
        const Jet2 n = norm(composed);
        return composed.map([&](const Jet2& g) { return restrict_to_axis(g / n); });
    };
    return {CurveGerm{SymField(gamma_hat), c.lo, c.hi}, CuspFactorization{SymField(xi_hat)},
            CurveReparametrization{t_of_u}};
}

inline NormalizedCurve normalize_half_arclength(const CurveGerm& c) {
    const Vec3d g2 = 2.0 * coefficient(c.gamma(0.0, 0.0, 2), 2, 0);
    if (norm(g2) <= 1e-10) throw PreconditionError("gamma''(0) = 0: not a generalized space-cusp");
    return normalize_half_arclength(c, factor_cusp(c));
}

// ---------------------------------------------------------------------------
// Frenet integration

struct Frame {
    Vec3d T{1, 0, 0};
    Vec3d N{0, 1, 0};
    Vec3d B{0, 0, 1};
};

/// Curvature/torsion data for the fundamental theorem of space curves.
struct FrenetData {
    SymScalar kappa;
    SymScalar tau;
    Frame initial;
    double step = 1e-3;
};

inline Frame orthonormalize(const Frame& f) {
    Frame r;
    r.T = normalized(f.T);
    r.N = normalized(f.N - dot(f.N, r.T) * r.T);
    r.B = cross(r.T, r.N);
    return r;
}

/// Rotation geodesic between two right-handed orthonormal frames.
inline Frame interpolate_frames(const Frame& a, const Frame& b, double t) {
    Eigen::Matrix3d A, B;
    A << a.T.x, a.N.x, a.B.x, a.T.y, a.N.y, a.B.y, a.T.z, a.N.z, a.B.z;
    B << b.T.x, b.N.x, b.B.x, b.T.y, b.N.y, b.B.y, b.T.z, b.N.z, b.B.z;
    const Eigen::AngleAxisd rel(A.transpose() * B);
    const Eigen::Matrix3d R = A * Eigen::AngleAxisd(t * rel.angle(), rel.axis()).toRotationMatrix();
    return {{R(0, 0), R(1, 0), R(2, 0)}, {R(0, 1), R(1, 1), R(2, 1)}, {R(0, 2), R(1, 2), R(2, 2)}};
}

/// Integrated Frenet system on [lo, hi] with 0 inside: the frame (T, N, B), the
/// arclength curve Gamma with Gamma(0) = 0, and the cusp curve
/// gamma(u) = integral_0^u s T(s) ds.
class FrenetSolution {
public:
    struct State {
        Vec3d Gamma, gamma;
        Frame frame;
    };

    FrenetSolution(FrenetData data, double lo, double hi) : data_(std::move(data)), lo_(lo), hi_(hi) {
        if (!(lo <= 0.0 && hi >= 0.0)) throw PreconditionError("Frenet interval must contain 0");
        const double h = data_.step;
        State s0{{0, 0, 0}, {0, 0, 0}, orthonormalize(data_.initial)};
        forward_.push_back(s0);
        backward_.push_back(s0);
        State s = s0;
        for (double u = 0.0; u < hi - 1e-15;) {
            const double step = std::min(h, hi - u);
            s = rk4(s, u, step);
            u += step;
            forward_.push_back(s);
        }
        s = s0;
        for (double u = 0.0; u > lo + 1e-15;) {
            const double step = std::max(-h, lo - u);
            s = rk4(s, u, step);
            u += step;
            backward_.push_back(s);
        }
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const FrenetData& data() const { return data_; }

    /// Maximum of ||G^T G - I|| over the stored samples.
    double max_orthonormality_defect() const {
        double m = 0.0;
        for (const auto* v : {&forward_, &backward_})
            for (const State& s : *v) {
                const Vec3d cols[3] = {s.frame.T, s.frame.N, s.frame.B};
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(dot(cols[i], cols[j]) - (i == j ? 1.0 : 0.0)));
                m = std::max(m, std::abs(det(cols[0], cols[1], cols[2]) - 1.0));
            }
        return m;
    }

    State state_at(double u) const {
        if (u < lo_ - 1e-12 || u > hi_ + 1e-12) throw DomainError("Frenet evaluation outside the integrated interval");
        const double h = data_.step;
        const auto& table = u >= 0 ? forward_ : backward_;
        const std::size_t k = std::min(static_cast<std::size_t>(std::floor(std::abs(u) / h)), table.size() - 1);
        const double uk = (u >= 0 ? 1.0 : -1.0) * static_cast<double>(k) * h;
        if (std::abs(u - uk) < 1e-15) return table[k];
        return rk4(table[k], uk, u - uk);
    }

    /// Taylor jets of the state at u: T, N, B, Gamma, gamma to order K.
    struct Jets {
        Vec3j T, N, B, Gamma, gamma;
    };

    Jets jets_at(double u, int K) const {
        const State s = state_at(u);
        const Jet2 kap = restrict_to_axis(data_.kappa(u, 0.0, K));
        const Jet2 tor = restrict_to_axis(data_.tau(u, 0.0, K));
        std::vector<Vec3d> T(K + 1), N(K + 1), B(K + 1), G(K + 1), g(K + 1);
        T[0] = s.frame.T;
        N[0] = s.frame.N;
        B[0] = s.frame.B;
        G[0] = s.Gamma;
        g[0] = s.gamma;
        for (int k = 0; k < K; ++k) {
            Vec3d kN{0, 0, 0}, kT{0, 0, 0}, tB{0, 0, 0}, tN{0, 0, 0};
            for (int i = 0; i <= k; ++i) {
                kN = kN + kap(i, 0) * N[k - i];
                kT = kT + kap(i, 0) * T[k - i];
                tB = tB + tor(i, 0) * B[k - i];
                tN = tN + tor(i, 0) * N[k - i];
            }
            T[k + 1] = kN / (k + 1.0);
            N[k + 1] = (tB - kT) / (k + 1.0);
            B[k + 1] = -tN / (k + 1.0);
            G[k + 1] = T[k] / (k + 1.0);
            const Vec3d uT = u * T[k] + (k > 0 ? T[k - 1] : Vec3d{0, 0, 0});
            g[k + 1] = uT / (k + 1.0);
        }
        auto pack = [K](const std::vector<Vec3d>& c) {
            Vec3j r = constant_jet({0, 0, 0}, K);
            for (int k = 0; k <= K; ++k)
                for (int d = 0; d < 3; ++d) r[d].at(k, 0) = c[static_cast<std::size_t>(k)][d];
            return r;
        };
        return {pack(T), pack(N), pack(B), pack(G), pack(g)};
    }

private:
    struct Deriv {
        Vec3d dGamma, dgamma, dT, dN, dB;
    };

    Deriv rhs(const State& s, double u) const {
        const double k = value(data_.kappa.f, u, 0.0);
        const double t = value(data_.tau.f, u, 0.0);
        if (!(k > 0.0)) throw DomainError("curvature kappa <= 0 encountered at u = " + std::to_string(u));
        return {s.frame.T, u * s.frame.T, k * s.frame.N, -k * s.frame.T + t * s.frame.B, -t * s.frame.N};
    }

    static State axpy(const State& s, const Deriv& d, double h) {
        return {s.Gamma + h * d.dGamma, s.gamma + h * d.dgamma,
                Frame{s.frame.T + h * d.dT, s.frame.N + h * d.dN, s.frame.B + h * d.dB}};
    }

    State rk4(const State& s, double u, double h) const {
        const Deriv k1 = rhs(s, u);
        const Deriv k2 = rhs(axpy(s, k1, h / 2), u + h / 2);
        const Deriv k3 = rhs(axpy(s, k2, h / 2), u + h / 2);
        const Deriv k4 = rhs(axpy(s, k3, h), u + h);
        auto comb = [h](const Vec3d& a, const Vec3d& b, const Vec3d& c, const Vec3d& d) {
            return (h / 6.0) * (a + 2.0 * b + 2.0 * c + d);
        };
        State r{s.Gamma + comb(k1.dGamma, k2.dGamma, k3.dGamma, k4.dGamma),
                s.gamma + comb(k1.dgamma, k2.dgamma, k3.dgamma, k4.dgamma),
                Frame{s.frame.T + comb(k1.dT, k2.dT, k3.dT, k4.dT), s.frame.N + comb(k1.dN, k2.dN, k3.dN, k4.dN),
                      s.frame.B + comb(k1.dB, k2.dB, k3.dB, k4.dB)}};
        r.frame = orthonormalize(r.frame);
        return r;
    }

    FrenetData data_;
    double lo_, hi_;
    std::vector<State> forward_, backward_;
};

struct FrenetCurves {
    std::shared_ptr<const FrenetSolution> solution;
    SymField unit_tangent;  // xi(u) = Gamma'(u), |xi| = 1
    SymField arclength_curve;  // Gamma(u)
    SymField cusp_curve;  // gamma(u) with gamma' = u xi
};

inline FrenetCurves integrate_frenet(const FrenetData& fd, double lo = -1.0, double hi = 1.0) {
    auto sol = std::make_shared<const FrenetSolution>(fd, lo, hi);
    VectorField T = [sol](double u, double, int K) { return sol->jets_at(u, K).T; };
    VectorField G = [sol](double u, double, int K) { return sol->jets_at(u, K).Gamma; };
    VectorField g = [sol](double u, double, int K) { return sol->jets_at(u, K).gamma; };
    return {sol, SymField(T), SymField(G), SymField(g)};
}

/// Curvature |xi'| and torsion det(xi, xi', xi'')/|xi'|^2 of a unit field, as
/// functions of u (jets).
inline Jet2 unit_field_curvature(const Vec3j& xi) {
    return norm(derivative_u(xi));
}

inline Jet2 unit_field_torsion(const Vec3j& xi) {
    const Vec3j d1 = derivative_u(xi);
    const Vec3j d2 = derivative_u(d1);
    const int K = order(d2);
    const Vec3j a = truncated(xi, K), b = truncated(d1, K);
    return det(a, b, d2) / dot(b, b);
}

/// Frenet data (kappa, tau, initial frame at 0) of a unit field xi.
inline FrenetData frenet_data_of(const SymField& unit_xi, double step = 1e-3) {
    VectorField xi = unit_xi.f;
    ScalarField kappa = [xi](double u, double, int K) {
        return restrict_to_axis(unit_field_curvature(xi(u, 0.0, K + 1)));
    };
    ScalarField tau = [xi](double u, double, int K) {
        return restrict_to_axis(unit_field_torsion(xi(u, 0.0, K + 2)));
    };
    const Vec3j j = xi(0.0, 0.0, 1);
    Frame f;
    f.T = coefficient(j, 0, 0);
    f.N = normalized(coefficient(j, 1, 0));
    f.B = cross(f.T, f.N);
    return {SymScalar(kappa), SymScalar(tau), orthonormalize(f), step};
}

}  // namespace swallowkit
