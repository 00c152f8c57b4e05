#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "curves.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "field.hpp"
#include "frontal.hpp"
#include "numerics.hpp"
#include "vec3.hpp"

namespace swallowkit {

/// f(u, v) = gamma(u) + v xi(u) + v^2 b(u, v) with gamma' = u xi.
struct SwallowtailData {
    SymField xi;  // depends on u only
    SymField b;
    SymField gamma{};  // optional precomputed cusp curve with gamma' = u xi, gamma(0) = 0
};

/// f(u, v) = gamma(u) + v xi(u) + v^2 q(u) xi'(u) + v^3 r(u, v).
struct AsymptoticData {
    SymField xi;
    SymScalar q;
    SymField r;
    SymField gamma{};  // optional precomputed cusp curve
};

struct Discriminants {
    double delta0 = 0.0;            // -det(xi, xi', -xi'' + 2 b(o))
    double delta1 = 0.0;            // det(xi, xi', b(o))
    double cusp_determinant = 0.0;  // det(xi, xi', xi'')(0)
    double cross_norm2 = 0.0;       // |xi(0) x xi'(0)|^2
};

namespace detail {

inline Vec3Expr scale_expr(const Expr& s, const Vec3Expr& a) { return scale(s, a); }

/// The jet j viewed at order K >= order(j), higher coefficients zero.  Exact
/// for factors that are later multiplied by v^(K - order(j)).
inline Jet2 padded(const Jet2& j, int K) {
    Jet2 r(K);
    for (int i = 0; i <= j.order(); ++i)
        for (int k = 0; i + k <= j.order(); ++k) r.at(i, k) = j(i, k);
    return r;
}

inline Vec3j padded(const Vec3j& a, int K) {
    return a.map([K](const Jet2& c) { return padded(c, K); });
}

/// Jets of xi and its first two derivatives at u (v-independent), order K.
struct AxisJets {
    Vec3j xi, d1, d2;
};

inline AxisJets axis_jets(const SymField& xi, double u, int K) {
    K = std::min(K, kMaxJetOrder - 2);
    const Vec3j x = restrict_to_axis(xi(u, 0.0, K + 2));
    const Vec3j d1 = derivative_u(x);
    const Vec3j d2 = derivative_u(d1);
    return {truncated(x, K), truncated(d1, K), d2};
}

inline void require_cusp_direction(const SymField& xi) {
    if (norm(value(xi.f, 0.0, 0.0)) <= 1e-12) throw PreconditionError("xi(0) = 0: the data do not define a frontal germ");
}

inline SymField axis_derivative(const SymField& xi) {
    if (xi.expr) return SymField(diff(*xi.expr, Var::U));
    return SymField(curve_derivative(axis_field(xi.f)));
}

inline std::optional<Vec3Expr> polynomial_over_v(const Vec3Expr& e, int power) {
    Vec3Expr r;
    for (int c = 0; c < 3; ++c) {
        auto p = to_polynomial(e[c]);
        if (!p) return std::nullopt;
        Polynomial q;
        for (const auto& [k, coef] : pruned(*p, 1e-13)) {
            if (k.second < power) return std::nullopt;
            q[{k.first, k.second - power}] += coef;
        }
        r[c] = from_polynomial(q);
    }
    return r;
}

/// Divide a jet vector by v^n: coefficient shift at v = 0 (losing n orders),
/// division by the jet of v elsewhere.
inline Vec3j divide_by_v_power(const Vec3j& R, double v, int n, double tol = 1e-7) {
    Vec3j out = R;
    if (v == 0.0) {
        for (int k = 0; k < n; ++k) out = out.map([tol](const Jet2& c) { return c.divided_by_v(tol); });
        return out;
    }
    const Jet2 Vn = pow(Jet2::variable_v(order(R), v), n);
    return out.map([&](const Jet2& c) { return c / Vn; });
}

}  // namespace detail

/// The germ gamma + v xi + v^2 b in R^3(a).
inline MapGerm build(const SwallowtailData& d, double a = 0.0) {
    detail::require_cusp_direction(d.xi);
    const SymField gamma = d.gamma ? d.gamma : cusp_curve(d.xi);
    if (gamma.expr && d.xi.expr && d.b.expr) {
        const Expr v = Expr::v();
        const Vec3Expr f = *gamma.expr + detail::scale_expr(v, *d.xi.expr) + detail::scale_expr(pow(v, 2), *d.b.expr);
        return MapGerm{SymField(f), SpaceForm{a}, {0.0, 0.0}, "swallowtail-data"};
    }
    VectorField g = gamma.f, xi = axis_field(d.xi.f), b = d.b.f;
    VectorField f = [g, xi, b](double u, double v, int K) {
        const Jet2 V = Jet2::variable_v(K, v);
        return g(u, v, K) + V * xi(u, v, K) + (V * V) * detail::padded(b(u, v, std::max(K - 2, 0)), K);
    };
    return MapGerm{SymField(f), SpaceForm{a}, {0.0, 0.0}, "swallowtail-data"};
}

/// Swallowtail data of an asymptotic representation: b = q xi' + v r.
inline SwallowtailData as_swallowtail_data(const AsymptoticData& d) {
    const SymField d1 = detail::axis_derivative(d.xi);
    if (d1.expr && d.q.expr && d.r.expr) {
        const Vec3Expr b = detail::scale_expr(*d.q.expr, *d1.expr) + detail::scale_expr(Expr::v(), *d.r.expr);
        return {d.xi, SymField(b), d.gamma};
    }
    VectorField x1 = d1.f, r = d.r.f;
    ScalarField q = axis_field(d.q.f);
    VectorField b = [x1, r, q](double u, double v, int K) {
        return q(u, v, K) * x1(u, v, K) + Jet2::variable_v(K, v) * detail::padded(r(u, v, std::max(K - 1, 0)), K);
    };
    return {d.xi, SymField(b), d.gamma};
}

/// The germ gamma + v xi + v^2 q xi' + v^3 r.  With demand_swallowtail the
/// cusp must be generic: there is no asymptotic swallowtail along a
/// non-generic space-cusp.
inline MapGerm build_asymptotic(const AsymptoticData& d, double a = 0.0, bool demand_swallowtail = false) {
    detail::require_cusp_direction(d.xi);
    if (demand_swallowtail) {
        const CuspClass c = classify_cusp(CuspFactorization{d.xi});
        if (c.kind != CuspKind::GenericCusp)
            throw PreconditionError("no asymptotic swallowtail exists along a non-generic space-cusp (det(xi, xi', xi'')(0) = 0)");
    }
    MapGerm g = build(as_swallowtail_data(d), a);
    g.label = "asymptotic-data";
    return g;
}

inline Discriminants discriminants(const SwallowtailData& d) {
    const auto j = detail::axis_jets(d.xi, 0.0, 0);
    const Vec3d x = values(j.xi), x1 = values(j.d1), x2 = values(j.d2);
    const Vec3d b0 = value(d.b.f, 0.0, 0.0);
    Discriminants r;
    r.delta0 = -det(x, x1, -1.0 * x2 + 2.0 * b0);
    r.delta1 = det(x, x1, b0);
    r.cusp_determinant = det(x, x1, x2);
    r.cross_norm2 = dot(cross(x, x1), cross(x, x1));
    return r;
}

inline Discriminants discriminants(const AsymptoticData& d) { return discriminants(as_swallowtail_data(d)); }

/// (2uq - 1)^2 (3 det(xi, xi', r) - 2 q^2 det(xi, xi', xi'')) at (u, v).
inline double delta_qr(const AsymptoticData& d, double u, double v = 0.0) {
    const auto j = detail::axis_jets(d.xi, u, 0);
    const Vec3d x = values(j.xi), x1 = values(j.d1), x2 = values(j.d2);
    const double q = value(d.q.f, u, 0.0);
    const Vec3d r = value(d.r.f, u, v);
    const double s = 2.0 * u * q - 1.0;
    return s * s * (3.0 * det(x, x1, r) - 2.0 * q * q * det(x, x1, x2));
}

/// lambda^4 K / (2 v^4 det(xi, xi', xi'')(u)) at a regular point (u, v), with
/// the classical Gaussian curvature K and lambda = (f_u x f_v) . nu-hat,
/// nu-hat = (f_u x f_v) / (v (2uq - 1)).
inline double asymptotic_curvature_ratio(const AsymptoticData& d, double u, double v) {
    const MapGerm g = build_asymptotic(d, 0.0);
    const Vec3j F = g.jet(u, v, 1);
    const Vec3d N = cross(partial(F, 1, 0), partial(F, 0, 1));
    const double q = value(d.q.f, u, 0.0);
    const double lam = dot(N, N) / (v * (2.0 * u * q - 1.0));
    const auto j = detail::axis_jets(d.xi, u, 0);
    const double D = det(values(j.xi), values(j.d1), values(j.d2));
    const double K = gaussian_curvature(g, u, v).K_E;
    return std::pow(lam, 4) * K / (2.0 * std::pow(v, 4) * D);
}

/// nu-tilde(u, 0) = -xi x xi' + 2u xi x b(u, 0) as a jet in u.
inline Vec3j normal_on_axis(const SwallowtailData& d, double u, int K = 3) {
    const auto j = detail::axis_jets(d.xi, u, K);
    const Vec3j b0 = restrict_to_axis(d.b(u, 0.0, K));
    const Jet2 U = Jet2::variable_u(K, u);
    return -1.0 * cross(j.xi, j.d1) + (2.0 * U) * cross(j.xi, b0);
}

/// delta(u) = <nu-tilde_u(u, 0), nu-tilde(u, 0) x xi(u)>.
inline double delta_function(const SwallowtailData& d, double u) {
    const Vec3j n = normal_on_axis(d, u, 2);
    const Vec3d xi = value(d.xi.f, u, 0.0);
    return dot(partial(n, 1, 0), cross(values(n), xi));
}

/// Recover (xi, b) from a generalized swallowtail in admissible form at o,
/// after the parameter change v -> v / alpha(u) with f_v(u, 0) = alpha xi.
inline SwallowtailData extract_data(const MapGerm& g, const ClassifyOptions& opt = {}) {
    if (g.base.u != 0.0 || g.base.v != 0.0) throw PreconditionError("extract_data expects the base point o = (0, 0)");
    const NormalField nf = make_normal(g, opt);
    if (nf.mode != NormalMode::AxisDivided) throw PreconditionError("the germ is regular at o: no swallowtail data");
    if (point_kind(nf, 0.0, 0.0, opt) != PointKind::SecondKind)
        throw PreconditionError("o is not a second-kind singular point: not a generalized swallowtail");
    const CurveGerm axis = singular_image(g);
    const CuspFactorization x = factor_cusp(axis);
    VectorField f = g.f.f, xi = x.xi.f, gamma = axis.gamma.f;

    ScalarField alpha = [f, xi](double u, double, int Kr) {
        const int K = std::min(Kr, kMaxJetOrder - 1);
        const Vec3j fv = restrict_to_axis(derivative_v(f(u, 0.0, K + 1)));
        const Vec3j X = xi(u, 0.0, K);
        return detail::padded(restrict_to_axis(dot(fv, X) / dot(X, X)), Kr);
    };
    for (double u : linspace(-0.1, 0.1, 11)) {
        const Vec3d fv = partial(f(u, 0.0, 1), 0, 1);
        const Vec3d X = value(xi, u, 0.0);
        const double res = norm(fv - value(alpha, u, 0.0) * X) / (1.0 + norm(fv));
        if (res > 1e-8) {
            std::ostringstream os;
            os << "f_v(u, 0) is not parallel to xi(u) (residual " << res << " at u = " << u << "): not in admissible form";
            throw DomainError(os.str());
        }
    }
    if (std::abs(value(alpha, 0.0, 0.0)) <= 1e-12) throw DomainError("f_v(o) = 0: degenerate germ");

    if (g.f.expr && x.xi.expr && axis.gamma.expr) {
        bool constant = true;
        const double a0 = value(alpha, 0.0, 0.0);
        for (double u : {-0.3, 0.17, 0.4})
            if (std::abs(value(alpha, u, 0.0) - a0) > 1e-13 * (1.0 + std::abs(a0))) constant = false;
        if (constant) {
            const Expr w = Expr::v();
            const Vec3Expr ft = substitute(*g.f.expr, Expr::u(), w / Expr(a0));
            const Vec3Expr rest = ft - *axis.gamma.expr - detail::scale_expr(w, *x.xi.expr);
            if (auto b = detail::polynomial_over_v(rest, 2)) return {x.xi, SymField(*b)};
        }
    }

    VectorField b = [f, xi, gamma, alpha](double u, double w, int K) {
        const int Kc = w == 0.0 ? std::min(K + 2, kMaxJetOrder) : K;
        const Jet2 U = Jet2::variable_u(Kc, u);
        const Jet2 W = Jet2::variable_v(Kc, w);
        const Jet2 A = alpha(u, 0.0, Kc);
        const Jet2 V = W / A;
        const Vec3j F = f(u, V.value(), Kc).map([&](const Jet2& c) { return c.compose(U, V); });
        const Vec3j R = F - gamma(u, 0.0, Kc) - W * xi(u, 0.0, Kc);
        return detail::divide_by_v_power(R, w, 2);
    };
    return {x.xi, SymField(b)};
}

/// Least-squares split b(u, 0) = p xi + q xi' as jets in u.
struct SpanSplit {
    Jet2 p, q;
    double residual;
};

inline SpanSplit split_on_span(const SwallowtailData& d, double u, int K) {
    const int Kr = K;
    K = std::min(K, kMaxJetOrder - 2);
    const auto j = detail::axis_jets(d.xi, u, K);
    const Vec3j b0 = restrict_to_axis(d.b(u, 0.0, K));
    const Jet2 a11 = dot(j.xi, j.xi), a12 = dot(j.xi, j.d1), a22 = dot(j.d1, j.d1);
    const Jet2 r1 = dot(b0, j.xi), r2 = dot(b0, j.d1);
    const Jet2 den = a11 * a22 - a12 * a12;
    SpanSplit s{detail::padded((r1 * a22 - r2 * a12) / den, Kr), detail::padded((a11 * r2 - a12 * r1) / den, Kr), 0.0};
    const Vec3d res = values(b0) - s.p.value() * values(j.xi) - s.q.value() * values(j.d1);
    s.residual = norm(res) / (1.0 + norm(values(b0)));
    return s;
}

/// Bring asymptotic swallowtail data to the form gamma + v xi + v^2 q xi' + v^3 r
/// by the parameter change v + p v^2 = w.  Rejects data with b(u, 0) outside
/// span{xi, xi'}.
inline AsymptoticData convert_to_asymptotic_form(const SwallowtailData& d, double lo = -0.2, double hi = 0.2,
                                                 int samples = 41, double tol = 1e-8) {
    detail::require_cusp_direction(d.xi);
    double worst = 0.0, worst_u = 0.0;
    for (double u : linspace(lo, hi, samples)) {
        const double r = split_on_span(d, u, 0).residual;
        if (r > worst) {
            worst = r;
            worst_u = u;
        }
    }
    if (worst > tol) {
        std::ostringstream os;
        os << "b(u, 0) is not in span{xi(u), xi'(u)}: worst residual " << worst << " at u = " << worst_u
           << " (the germ is not asymptotic)";
        throw PreconditionError(os.str());
    }
    ScalarField p = [d](double u, double, int K) { return restrict_to_axis(split_on_span(d, u, K).p); };
    ScalarField q = [d](double u, double, int K) { return restrict_to_axis(split_on_span(d, u, K).q); };

    bool p_zero = true, q_const = true;
    const double q0 = value(q, 0.0, 0.0);
    for (double u : linspace(lo, hi, 9)) {
        if (std::abs(value(p, u, 0.0)) > 1e-12) p_zero = false;
        if (std::abs(value(q, u, 0.0) - q0) > 1e-12 * (1.0 + std::abs(q0))) q_const = false;
    }
    const SymScalar qs = q_const ? SymScalar(Expr(std::abs(q0) < 1e-14 ? 0.0 : q0)) : SymScalar(q);
    const SymField d1 = detail::axis_derivative(d.xi);

    if (p_zero && q_const && d.b.expr && d1.expr) {
        const Vec3Expr rest = *d.b.expr - detail::scale_expr(*qs.expr, *d1.expr);
        if (auto r = detail::polynomial_over_v(rest, 1)) return {d.xi, qs, SymField(*r)};
    }

    const MapGerm g = build(d);
    VectorField f = g.f.f, gamma = cusp_curve(d.xi).f, xi = axis_field(d.xi.f), x1 = d1.f;
    ScalarField qf = q;
    VectorField r = [f, gamma, xi, x1, p, qf](double u, double w, int K) {
        const int Kc = w == 0.0 ? std::min(K + 3, kMaxJetOrder) : K;
        const Jet2 U = Jet2::variable_u(Kc, u);
        const Jet2 W = Jet2::variable_v(Kc, w);
        const Jet2 P = p(u, 0.0, Kc);
        const Jet2 V = (2.0 * W) / (1.0 + sqrt(1.0 + 4.0 * P * W));
        const Vec3j F = f(u, V.value(), Kc).map([&](const Jet2& c) { return c.compose(U, V); });
        const Vec3j R = F - gamma(u, 0.0, Kc) - W * xi(u, 0.0, Kc) - (W * W * qf(u, 0.0, Kc)) * x1(u, 0.0, Kc);
        return detail::divide_by_v_power(R, w, 3);
    };
    return {d.xi, qs, SymField(r)};
}

struct SwallowtailConstruction {
    SwallowtailData data;
    bool reversed_parameter = false;  // built along gamma(-u)
    std::string rule;
};

/// Data of a swallowtail along the given space-cusp with the requested sign
/// sigma_S in {+1, -1, 0}, normalized so that sigma0_S = +1.
inline SwallowtailConstruction exists_swallowtail_along(const CuspFactorization& c, int want) {
    if (want < -1 || want > 1) throw PreconditionError("requested sign must be -1, 0 or +1");
    CuspClass cls = classify_cusp(c);
    if (cls.kind == CuspKind::NotACusp) throw PreconditionError("xi(0) x xi'(0) = 0: not a space-cusp");
    SwallowtailConstruction out;
    CuspFactorization x = c;
    if (cls.kind == CuspKind::GenericCusp && cls.determinant < 0) {
        x = reflect_parameter(c);
        out.reversed_parameter = true;
    }
    const SymField d1 = detail::axis_derivative(x.xi);
    const SymField d2 = detail::axis_derivative(d1);
    auto combine = [&](double s, const SymField& a) -> SymField {
        if (a.expr) return SymField(detail::scale_expr(Expr(s), *a.expr));
        return SymField(scaled(s, a.f));
    };
    if (cls.kind == CuspKind::GenericCusp) {
        if (want == 1) {
            out.data = {x.xi, combine(0.25, d2)};
            out.rule = "b = xi''/4";
        } else if (want == -1) {
            out.data = {x.xi, combine(-1.0, d2)};
            out.rule = "b = -xi''";
        } else {
            out.data = {x.xi, SymField(Vec3Expr{Expr(0.0), Expr(0.0), Expr(0.0)})};
            out.rule = "b = 0";
        }
        return out;
    }
    if (want == 0)
        throw PreconditionError("no asymptotic swallowtail exists along a non-generic space-cusp");
    if (want == 1)
        throw PreconditionError(
            "along a non-generic space-cusp every swallowtail has sigma0_S * sigma_S < 0; sigma_S = +1 is impossible "
            "with sigma0_S = +1");
    if (x.xi.expr && d1.expr) {
        out.data = {x.xi, SymField(detail::scale_expr(Expr(-1.0), cross(*x.xi.expr, *d1.expr)))};
    } else {
        out.data = {x.xi, SymField(scaled(-1.0, cross(axis_field(x.xi.f), d1.f)))};
    }
    out.rule = "b = -xi x xi'";
    return out;
}

}  // namespace swallowkit
