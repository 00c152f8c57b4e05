#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curves.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "metric.hpp"
#include "sign.hpp"
#include "vec3.hpp"

namespace swallowkit {

/// A germ of a smooth map (u, v) -> R^3(a) at a base point.
struct MapGerm {
    SymField f;
    SpaceForm space;
    Point base{};
    std::string label;

    Vec3j jet(double u, double v, int K) const { return f(u, v, K); }
    Vec3d operator()(double u, double v) const { return value(f.f, u, v); }
};

inline constexpr int kClassifyOrder = 6;

enum class NormalMode { Regular, AxisDivided };

/// Unit normal of a frontal.  Off the singular set nu-tilde = f_u x_g f_v; for a
/// germ in admissible form (singular set = u-axis) it is (f_u x_g f_v)/v,
/// which extends smoothly across the axis.  nu = orientation * nu-tilde/|nu-tilde|_g.
struct NormalField {
    MapGerm germ;
    NormalMode mode = NormalMode::Regular;
    int orientation = 1;
    std::string orientation_rule = "nu-tilde = f_u x_g f_v";

    /// nu-tilde with orientation not applied, order K-2.
    Vec3j unoriented(double u, double v, int K) const {
        const Vec3j F = germ.jet(u, v, K);
        const Vec3j fu = derivative_u(F), fv = derivative_v(F);
        const Vec3j N = cross_g(germ.space, truncated(F, K - 1), fu, fv);
        if (mode == NormalMode::Regular) return truncated(N, K - 2);
        if (v == 0.0) return N.map([](const Jet2& c) { return c.divided_by_v(1e-8); });
        const Jet2 V = Jet2::variable_v(K - 1, v);
        return truncated(N.map([&](const Jet2& c) { return c / V; }), K - 2);
    }

    /// Unit (for g_a) oriented normal, order K-2.
    Vec3j unit(double u, double v, int K) const {
        const Vec3j nt = unoriented(u, v, K);
        const Vec3j F = truncated(germ.jet(u, v, K), K - 2);
        const Jet2 n = metric_norm(germ.space, F, nt);
        return nt.map([&](const Jet2& c) { return (orientation * c) / n; });
    }
};

enum class PointKind { Regular, FirstKind, SecondKind, Degenerate };

inline const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::Regular: return "regular";
        case PointKind::FirstKind: return "first";
        case PointKind::SecondKind: return "second";
        case PointKind::Degenerate: return "degenerate";
    }
    return "";
}

struct SingularityReport {
    Point at;
    double a = 0.0;
    bool is_singular = false;
    bool is_frontal = true;
    bool is_nondegenerate = false;
    PointKind kind = PointKind::Regular;
    bool is_wavefront = false;
    bool is_swallowtail = false;
    bool is_generalized_swallowtail = false;
    bool is_cuspidal_edge = false;
    Sign sigma0_S = Sign::Zero;
    Sign sigma_S = Sign::Zero;
    double kappa_nu = 0.0;
    double mu_C = 0.0;
    std::array<double, 2> null_vector{0.0, 0.0};
    std::array<double, 2> singular_tangent{0.0, 0.0};
    double lambda_v = 0.0;
    double lambda_u = 0.0;
    Vec3d normal{0, 0, 0};
    int orientation = 1;
    std::string orientation_rule;
    std::optional<double> delta0_S, delta1_S;
    std::vector<std::string> notes;
};

/// Tolerances of the classifier.
struct ClassifyOptions {
    SignTolerance sign{};
    double tangency = 1e-6;     // |sin angle(null, singular tangent)| below this => second kind
    double singular = 1e-10;    // |f_u x f_v| relative threshold for a singular point
    int order = kClassifyOrder;
};

namespace detail {

/// Kernel direction of the 3x2 Jacobian (f_u f_v).
inline std::array<double, 2> kernel_direction(const Vec3d& fu, const Vec3d& fv) {
    Eigen::Matrix<double, 3, 2> J;
    J << fu.x, fv.x, fu.y, fv.y, fu.z, fv.z;
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(J, Eigen::ComputeFullV);
    const Eigen::Vector2d k = svd.matrixV().col(1);
    return {k(0), k(1)};
}

inline bool is_singular_at(const MapGerm& g, double u, double v, double tol) {
    const Vec3j F = g.jet(u, v, 1);
    const Vec3d fu = partial(F, 1, 0), fv = partial(F, 0, 1);
    const double scale = std::max({norm(fu) * norm(fv), norm(fu) * norm(fu), norm(fv) * norm(fv), 1e-300});
    return norm(cross(fu, fv)) <= tol * std::max(scale, 1.0);
}

/// Whether the map vanishes-normal test f_u x f_v = 0 holds along the u-axis
/// near u to the jet order (singular set contains the axis).
inline bool axis_is_singular(const MapGerm& g, double u, int K, double tol) {
    const Vec3j F = g.jet(u, 0.0, K);
    const Vec3j N = cross(derivative_u(F), derivative_v(F));
    const double scale = 1.0 + std::max({N.x.max_abs(), N.y.max_abs(), N.z.max_abs()});
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i <= N[c].order(); ++i)
            if (std::abs(N[c](i, 0)) > tol * scale) return false;
    return true;
}

}  // namespace detail

/// Build the normal field of a germ; orientation is fixed at the base point:
/// at a second-kind point {f_v, nabla_v f_u, nu} is a positive frame.
inline NormalField make_normal(const MapGerm& g, const ClassifyOptions& opt = {}) {
    NormalField nf{g};
    const Point p = g.base;
    if (!detail::is_singular_at(g, p.u, p.v, opt.singular)) {
        nf.mode = NormalMode::Regular;
        return nf;
    }
    if (std::abs(p.v) > 0.0 || !detail::axis_is_singular(g, p.u, opt.order, 1e-8))
        throw DomainError("singular base point is not in admissible form (singular set must be the u-axis)");
    nf.mode = NormalMode::AxisDivided;
    nf.orientation_rule = "nu-tilde = (f_u x_g f_v)/v";
    return nf;
}

/// Euclidean lambda-hat = det(f_u, f_v, nu-tilde_E) with the unoriented
/// Euclidean nu-tilde (f_u x f_v, divided by v in admissible form).  Same zero
/// set as det_g(f_u, f_v, nu); for built germs lambda-hat_v(o) = |xi x xi'|^2.
inline Jet2 lambda_jet(const NormalField& nf, double u, double v, int K) {
    const Vec3j F = nf.germ.jet(u, v, K);
    const Vec3j fu = derivative_u(F), fv = derivative_v(F);
    const Vec3j N = cross(fu, fv);
    Vec3j nt;
    if (nf.mode == NormalMode::Regular)
        nt = truncated(N, K - 2);
    else if (v == 0.0)
        nt = N.map([](const Jet2& c) { return c.divided_by_v(1e-8); });
    else
        nt = truncated(N.map([&](const Jet2& c) { return c / Jet2::variable_v(K - 1, v); }), K - 2);
    const int k = order(nt);
    return det(truncated(fu, k), truncated(fv, k), nt);
}

/// lambda = det_g(f_u, f_v, nu) with the oriented unit normal.
inline Jet2 lambda_function(const NormalField& nf, double u, double v, int K) {
    const Vec3j F = nf.germ.jet(u, v, K);
    const Vec3j n = nf.unit(u, v, K);
    const int k = order(n);
    return det_g(nf.germ.space, truncated(F, k), truncated(derivative_u(F), k), truncated(derivative_v(F), k), n);
}

/// Covariant-derivative helper on a jet at one point.
struct LocalFrame {
    SpaceForm sf;
    Vec3j F;

    Vec3j fu() const { return derivative_u(F); }
    Vec3j fv() const { return derivative_v(F); }
    Vec3j nabla(const Vec3j& W, Direction d) const {
        const int K = std::min(order(W), order(F) - 1);
        return covariant_derivative(sf, truncated(F, K + 1), truncated(W, K), d);
    }
    double g(const Vec3d& A, const Vec3d& B) const { return metric(sf, values(F), A, B); }
    double gnorm(const Vec3d& A) const { return std::sqrt(g(A, A)); }
    double detg(const Vec3d& A, const Vec3d& B, const Vec3d& C) const { return det_g(sf, values(F), A, B, C); }
    Vec3d crossg(const Vec3d& A, const Vec3d& B) const { return cross_g(sf, values(F), A, B); }
};

/// Kind of a singular point in admissible form from the null vector and the
/// singular-curve tangent.
inline PointKind point_kind(const NormalField& nf, double u, double v, const ClassifyOptions& opt,
                            std::array<double, 2>* null_out = nullptr, std::array<double, 2>* tangent_out = nullptr,
                            Jet2* lambda_out = nullptr) {
    if (!detail::is_singular_at(nf.germ, u, v, opt.singular)) return PointKind::Regular;
    const Vec3j F = nf.germ.jet(u, v, 2);
    const auto eta = detail::kernel_direction(partial(F, 1, 0), partial(F, 0, 1));
    const Jet2 lam = lambda_jet(nf, u, v, opt.order);
    const double lu = lam(1, 0), lv = lam(0, 1);
    if (null_out) *null_out = eta;
    if (lambda_out) *lambda_out = lam;
    const double dl = std::hypot(lu, lv);
    if (classify_sign(dl, 1.0, opt.sign) != Sign::Positive) return PointKind::Degenerate;
    const std::array<double, 2> t{-lv / dl, lu / dl};
    if (tangent_out) *tangent_out = t;
    const double sin_angle = std::abs(eta[0] * t[1] - eta[1] * t[0]);
    return sin_angle < opt.tangency ? PointKind::SecondKind : PointKind::FirstKind;
}

namespace detail {

inline Sign sign_of(double x, double scale, const ClassifyOptions& opt) { return classify_sign(x, scale, opt.sign); }

/// Orientation making {f_v, nabla_v f_u, nu} positive at a second-kind point.
inline int second_kind_orientation(const NormalField& nf, const ClassifyOptions& opt) {
    const Point p = nf.germ.base;
    const int K = opt.order;
    LocalFrame L{nf.germ.space, nf.germ.jet(p.u, p.v, K)};
    const Vec3d fv = values(L.fv());
    const Vec3d fuv = values(L.nabla(L.fu(), Direction::V));
    const Vec3d nt = values(nf.unoriented(p.u, p.v, K));
    const double d = L.detg(fv, fuv, nt);
    return d >= 0.0 ? 1 : -1;
}

}  // namespace detail

/// Normal field oriented by the rule at the base point.
inline NormalField oriented_normal(const MapGerm& g, const ClassifyOptions& opt = {}) {
    NormalField nf = make_normal(g, opt);
    if (nf.mode == NormalMode::AxisDivided &&
        point_kind(nf, g.base.u, g.base.v, opt) == PointKind::SecondKind) {
        nf.orientation = detail::second_kind_orientation(nf, opt);
        nf.orientation_rule = "{f_v, nabla_v f_u, nu} positive at the base point";
    }
    return nf;
}

/// Wave-front test at a singular point: d nu(eta) != 0 for the null vector eta.
inline bool is_wavefront_at(const NormalField& nf, double u, double v, const std::array<double, 2>& eta,
                            const ClassifyOptions& opt) {
    const Vec3j n = nf.unit(u, v, opt.order);
    const Vec3d dn = eta[0] * partial(n, 1, 0) + eta[1] * partial(n, 0, 1);
    const double rho = conformal_factor(nf.germ.space, nf.germ(u, v));
    return classify_sign(rho * norm(dn), 1.0, opt.sign) == Sign::Positive;
}

struct SecondKindInvariants {
    Sign sigma0_S, sigma_S;
    double kappa_nu, mu_C;
    double numerator0, numerator_g;
};

inline SecondKindInvariants second_kind_invariants(const NormalField& nf, const ClassifyOptions& opt = {}) {
    const Point p = nf.germ.base;
    const int K = opt.order;
    LocalFrame L{nf.germ.space, nf.germ.jet(p.u, p.v, K)};
    const Vec3j n = nf.unit(p.u, p.v, K);
    const Vec3j fv = L.fv();
    const Vec3d fuv = values(L.nabla(fv, Direction::U));
    const Vec3d fvv = values(L.nabla(fv, Direction::V));
    const Vec3d nu = values(n);
    const Vec3d nu_u = values(L.nabla(n, Direction::U));
    const Vec3d fvd = values(fv);
    SecondKindInvariants r{};
    r.numerator0 = -L.g(fuv, nu_u);
    r.numerator_g = L.g(fvv, nu);
    r.sigma0_S = detail::sign_of(r.numerator0, L.gnorm(fuv) * L.gnorm(nu_u), opt);
    r.sigma_S = detail::sign_of(r.numerator_g, L.gnorm(fvv), opt);
    const double fv2 = L.g(fvd, fvd);
    if (fv2 <= 0.0) throw DomainError("f_v vanishes at the second-kind point");
    r.kappa_nu = r.numerator_g / fv2;
    const double denom = L.gnorm(L.crossg(fuv, fvd));
    if (denom <= 0.0) throw DomainError("nabla_v f_u vanishes or is parallel to f_v at the second-kind point");
    r.mu_C = std::pow(std::sqrt(fv2), 3) * r.numerator0 / denom;
    return r;
}

/// Full classification at the base point of the germ.
inline SingularityReport classify(const MapGerm& g, const ClassifyOptions& opt = {}) {
    SingularityReport rep;
    rep.at = g.base;
    rep.a = g.space.a;
    g.space.require(g(g.base.u, g.base.v));
    NormalField nf = oriented_normal(g, opt);
    const Point p = g.base;
    rep.orientation = nf.orientation;
    rep.orientation_rule = nf.orientation_rule;
    rep.normal = values(nf.unit(p.u, p.v, opt.order));
    if (nf.mode == NormalMode::Regular) {
        rep.kind = PointKind::Regular;
        rep.is_nondegenerate = true;
        return rep;
    }
    rep.is_singular = true;
    Jet2 lam;
    rep.kind = point_kind(nf, p.u, p.v, opt, &rep.null_vector, &rep.singular_tangent, &lam);
    rep.lambda_u = lam(1, 0);
    rep.lambda_v = lam(0, 1);
    if (rep.kind == PointKind::Degenerate) {
        rep.notes.push_back("degenerate singular point (d lambda = 0); invariants suppressed");
        return rep;
    }
    rep.is_nondegenerate = true;
    rep.is_wavefront = is_wavefront_at(nf, p.u, p.v, rep.null_vector, opt);
    if (rep.kind == PointKind::FirstKind) {
        rep.is_cuspidal_edge = rep.is_wavefront;
        return rep;
    }
    // Second kind: isolated among first-kind points on the singular curve?
    bool isolated = true;
    for (double du : {-1e-2, -1e-3, 1e-3, 1e-2}) {
        if (point_kind(nf, p.u + du, 0.0, opt) != PointKind::FirstKind) isolated = false;
    }
    rep.is_generalized_swallowtail = isolated;
    if (!isolated) rep.notes.push_back("second-kind point is not isolated on the singular curve");
    rep.is_swallowtail = rep.is_generalized_swallowtail && rep.is_wavefront;
    const SecondKindInvariants inv = second_kind_invariants(nf, opt);
    rep.sigma0_S = inv.sigma0_S;
    rep.sigma_S = inv.sigma_S;
    rep.kappa_nu = inv.kappa_nu;
    rep.mu_C = inv.mu_C;
    return rep;
}

inline Sign sigma0_S(const MapGerm& g, const ClassifyOptions& opt = {}) {
    return second_kind_invariants(oriented_normal(g, opt), opt).sigma0_S;
}
inline Sign sigma_g_S(const MapGerm& g, const ClassifyOptions& opt = {}) {
    return second_kind_invariants(oriented_normal(g, opt), opt).sigma_S;
}
inline double limiting_normal_curvature(const MapGerm& g, const ClassifyOptions& opt = {}) {
    return second_kind_invariants(oriented_normal(g, opt), opt).kappa_nu;
}
inline double normalized_cuspidal_curvature(const MapGerm& g, const ClassifyOptions& opt = {}) {
    return second_kind_invariants(oriented_normal(g, opt), opt).mu_C;
}

// ---------------------------------------------------------------------------
// Invariants along the singular u-axis

namespace detail {

/// Null direction (alpha, beta) at (u, 0), oriented with beta > 0.
inline std::array<double, 2> oriented_null(const NormalField& nf, double u, const ClassifyOptions& opt) {
    std::array<double, 2> eta{}, tangent{};
    const PointKind k = point_kind(nf, u, 0.0, opt, &eta, &tangent);
    if (k == PointKind::Regular) throw DomainError("(u, 0) is not a singular point");
    if (k != PointKind::FirstKind)
        throw DomainError("(u, 0) is not a first-kind point (u = " + std::to_string(u) + ")");
    if (eta[1] < 0) eta = {-eta[0], -eta[1]};
    return eta;
}

/// Jets along s -> f((u, 0) + s zeta) and the covariant derivatives of c'.
struct LineDerivatives {
    Vec3d c1, c2, c3;  // c', nabla c', nabla nabla c' at s = 0
};

inline LineDerivatives line_derivatives(const MapGerm& g, double u, double v, const std::array<double, 2>& zeta, int K) {
    const Jet2 S = Jet2::variable_u(K, 0.0);
    const Jet2 U = u + zeta[0] * S;
    const Jet2 V = v + zeta[1] * S;
    const Vec3j c = g.jet(u, v, K).map([&](const Jet2& x) { return restrict_to_axis(x.compose(U, V)); });
    const Vec3j c1 = derivative_u(c);
    const Vec3j c2 = covariant_derivative(g.space, truncated(c, order(c1)), c1, Direction::U);
    const Vec3j c3 = covariant_derivative(g.space, truncated(c, order(c2)), c2, Direction::U);
    return {values(c1), values(c2), values(c3)};
}

}  // namespace detail

/// sigma_0^C(u): sign of the cuspidal curvature along the edge, relative to
/// the germ's normal: sgn det_g(f_u, nabla_z f_z, nabla_z nabla_z f_z) *
/// sgn det_g(f_u, nabla_z f_z, nu) with z the null direction pointing into v > 0.
inline Sign sigma0_C(const NormalField& nf, double u, const ClassifyOptions& opt = {}) {
    const auto zeta = detail::oriented_null(nf, u, opt);
    const auto d = detail::line_derivatives(nf.germ, u, 0.0, zeta, opt.order);
    LocalFrame L{nf.germ.space, nf.germ.jet(u, 0.0, opt.order)};
    const Vec3d fu = values(L.fu());
    const Vec3d nu = values(nf.unit(u, 0.0, opt.order));
    const Sign s1 = detail::sign_of(L.detg(fu, d.c2, d.c3), L.gnorm(fu) * L.gnorm(d.c2) * L.gnorm(d.c3), opt);
    const Sign s2 = detail::sign_of(L.detg(fu, d.c2, nu), L.gnorm(fu) * L.gnorm(d.c2), opt);
    return product(s1, s2);
}

/// sigma_g^C(u) = sgn <nabla_u f_u(u, 0), nu>_g, the numerator of the
/// limiting normal curvature along the edge.
inline Sign sigma_g_C(const NormalField& nf, double u, const ClassifyOptions& opt = {}) {
    detail::oriented_null(nf, u, opt);
    LocalFrame L{nf.germ.space, nf.germ.jet(u, 0.0, opt.order)};
    const Vec3d fuu = values(L.nabla(L.fu(), Direction::U));
    const Vec3d nu = values(nf.unit(u, 0.0, opt.order));
    return detail::sign_of(L.g(fuu, nu), L.gnorm(fuu), opt);
}

/// Limiting normal curvature at (u, 0): the second-kind formula at the base
/// point, <nabla_u f_u, nu>/|f_u|^2 at cuspidal-edge points.
inline double kappa_nu_on_axis(const NormalField& nf, double u, const ClassifyOptions& opt = {}) {
    const PointKind k = point_kind(nf, u, 0.0, opt);
    LocalFrame L{nf.germ.space, nf.germ.jet(u, 0.0, opt.order)};
    const Vec3d nu = values(nf.unit(u, 0.0, opt.order));
    if (k == PointKind::SecondKind) {
        const Vec3d fvv = values(L.nabla(L.fv(), Direction::V));
        const Vec3d fv = values(L.fv());
        return L.g(fvv, nu) / L.g(fv, fv);
    }
    if (k != PointKind::FirstKind) throw DomainError("(u, 0) is not a non-degenerate singular point");
    const Vec3d fuu = values(L.nabla(L.fu(), Direction::U));
    const Vec3d fu = values(L.fu());
    return L.g(fuu, nu) / L.g(fu, fu);
}

/// Direction of the limiting normal at a second-kind point: a positive
/// multiple of nabla_u f_v(o) x_g f_v(o), normalized for g.
inline Vec3d limit_normal_at_second_kind(const MapGerm& g, const ClassifyOptions& opt = {}) {
    NormalField nf = make_normal(g, opt);
    if (nf.mode != NormalMode::AxisDivided || point_kind(nf, g.base.u, g.base.v, opt) != PointKind::SecondKind)
        throw DomainError("base point is not a second-kind singular point");
    LocalFrame L{g.space, g.jet(g.base.u, g.base.v, opt.order)};
    const Vec3d d = L.crossg(values(L.nabla(L.fv(), Direction::U)), values(L.fv()));
    const double n = L.gnorm(d);
    if (n == 0.0) throw DomainError("nabla_u f_v is parallel to f_v: limit normal undefined");
    // Consistency with the one-sided limits of nu-tilde.
    for (double du : {-1e-4, 1e-4}) {
        const Vec3d side = values(nf.unoriented(g.base.u + du, 0.0, opt.order));
        if (L.g(side, d) <= 0.0) throw DomainError("limit of nu-tilde is inconsistent: not a frontal");
    }
    return d / n;
}

/// Angle (radians) between two vectors.
inline double angle_between(const Vec3d& a, const Vec3d& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Residual of <nabla_u f_u, nu-tilde> = eps^2 <nabla_v f_v, nu-tilde> at (u, 0),
/// with eps from the null vector d_u + eps d_v.
struct EpsilonCheck {
    double epsilon, lhs, rhs, residual;
};

inline EpsilonCheck epsilon_identity_check(const MapGerm& g, double u, const ClassifyOptions& opt = {}) {
    NormalField nf = make_normal(g, opt);
    if (nf.mode != NormalMode::AxisDivided) throw DomainError("the germ has no singular curve at the base point");
    std::array<double, 2> eta{};
    const PointKind k = point_kind(nf, u, 0.0, opt, &eta);
    if (k == PointKind::Regular) throw DomainError("(u, 0) is not a singular point");
    if (std::abs(eta[0]) < 1e-12) throw DomainError("extended null vector field not resolvable (null vector is d/dv)");
    const double eps = eta[1] / eta[0];
    LocalFrame L{g.space, g.jet(u, 0.0, opt.order)};
    const Vec3d nt = values(nf.unoriented(u, 0.0, opt.order));
    const double lhs = L.g(values(L.nabla(L.fu(), Direction::U)), nt);
    const double rhs = eps * eps * L.g(values(L.nabla(L.fv(), Direction::V)), nt);
    return {eps, lhs, rhs, std::abs(lhs - rhs) / (1.0 + std::abs(lhs))};
}

struct PlanarCuspVerdict {
    Vec3d plane_normal;
    bool is_planar_cusp = false;
    double planar_determinant = 0.0;  // det of (c'', c''') in the plane
};

/// Projection onto the limiting tangent plane and the planar-cusp test of the
/// projected singular curve.
inline PlanarCuspVerdict project_to_limiting_tangent_plane(const MapGerm& g, const ClassifyOptions& opt = {}) {
    const Vec3d n = normalized(limit_normal_at_second_kind(g, opt));
    const int K = 4;
    const Vec3j c = restrict_to_axis(g.jet(g.base.u, 0.0, K));
    auto project = [&](const Vec3d& x) { return x - dot(x, n) * n; };
    const Vec3d c1 = project(partial(c, 1, 0)), c2 = project(partial(c, 2, 0)), c3 = project(partial(c, 3, 0));
    PlanarCuspVerdict r;
    r.plane_normal = n;
    r.planar_determinant = det(c2, c3, n);
    const double scale = norm(c2) * norm(c3);
    r.is_planar_cusp = norm(c1) <= 1e-10 * (1.0 + norm(c2)) &&
                       classify_sign(r.planar_determinant, scale, opt.sign) != Sign::Zero &&
                       classify_sign(r.planar_determinant, scale, opt.sign) != Sign::Indeterminate;
    return r;
}

/// The singular-curve image u -> f(u, 0) as a curve germ.
inline CurveGerm singular_image(const MapGerm& g) {
    VectorField f = g.f.f;
    const double u0 = g.base.u;
    CurveGerm c;
    if (g.f.expr && u0 == 0.0)
        c.gamma = SymField(substitute(*g.f.expr, Expr::u(), Expr(0.0)));
    else
        c.gamma = SymField(VectorField([f, u0](double u, double, int K) { return restrict_to_axis(f(u0 + u, 0.0, K)); }));
    return c;
}

// ---------------------------------------------------------------------------
// Gaussian curvature at regular points

struct CurvatureReport {
    double K_a;       // sectional curvature of the induced metric
    double K_ext;     // extrinsic curvature det(II_g)/det(I_g), K_a = a + K_ext
    double K_E;       // classical Euclidean Gaussian curvature of f
    double K_brioschi;  // K_a recomputed intrinsically from rho(f)^2 I_E
    double H_E;       // Euclidean mean curvature
    double lambda_E;  // det(f_u, f_v, n_E) with the unit Euclidean normal
};

namespace detail {

/// Brioschi formula for the Gaussian curvature of E du^2 + 2F du dv + G dv^2.
inline double brioschi(const Jet2& E, const Jet2& F, const Jet2& G) {
    const double e = E.value(), f = F.value(), g = G.value();
    const double Eu = E.partial(1, 0), Ev = E.partial(0, 1);
    const double Fu = F.partial(1, 0), Fv = F.partial(0, 1);
    const double Gu = G.partial(1, 0), Gv = G.partial(0, 1);
    const double Evv = E.partial(0, 2), Guu = G.partial(2, 0), Fuv = F.partial(1, 1);
    Eigen::Matrix3d A, B;
    A << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev, Fv - 0.5 * Gu, e, f, 0.5 * Gv, f, g;
    B << 0.0, 0.5 * Ev, 0.5 * Gu, 0.5 * Ev, e, f, 0.5 * Gu, f, g;
    const double d = e * g - f * f;
    return (A.determinant() - B.determinant()) / (d * d);
}

}  // namespace detail

inline CurvatureReport gaussian_curvature(const MapGerm& g, double u, double v) {
    const int K = 4;
    const Vec3j F = g.jet(u, v, K);
    g.space.require(values(F));
    const Vec3j fu = derivative_u(F), fv = derivative_v(F);
    const Vec3d fu0 = values(fu), fv0 = values(fv);
    const Vec3d N = cross(fu0, fv0);
    const double nN = norm(N);
    if (nN <= 1e-12 * (1.0 + norm(fu0) * norm(fv0))) throw DomainError("Gaussian curvature requested on the singular set");
    const Vec3d n = N / nN;
    const Vec3d fuu = partial(F, 2, 0), fuv = partial(F, 1, 1), fvv = partial(F, 0, 2);
    CurvatureReport r{};
    {
        const double E = dot(fu0, fu0), Fm = dot(fu0, fv0), G = dot(fv0, fv0);
        const double L = dot(fuu, n), M = dot(fuv, n), Nn = dot(fvv, n);
        r.K_E = (L * Nn - M * M) / (E * G - Fm * Fm);
        r.H_E = (E * Nn - 2 * Fm * M + G * L) / (2 * (E * G - Fm * Fm));
        r.lambda_E = nN;
    }
    {
        LocalFrame Lf{g.space, F};
        const Vec3d p = values(F);
        const double rho = conformal_factor(g.space, p);
        const Vec3d nu = n / rho;  // unit for g
        const Vec3d Xuu = values(Lf.nabla(fu, Direction::U));
        const Vec3d Xuv = values(Lf.nabla(fv, Direction::U));
        const Vec3d Xvv = values(Lf.nabla(fv, Direction::V));
        const double E = Lf.g(fu0, fu0), Fm = Lf.g(fu0, fv0), G = Lf.g(fv0, fv0);
        const double L = Lf.g(Xuu, nu), M = Lf.g(Xuv, nu), Nn = Lf.g(Xvv, nu);
        r.K_ext = (L * Nn - M * M) / (E * G - Fm * Fm);
        r.K_a = g.space.a + r.K_ext;
        const Jet2 rho2 = pow(conformal_factor(g.space, truncated(F, K - 1)), 2);
        const Vec3j a = truncated(fu, K - 1), b = truncated(fv, K - 1);
        r.K_brioschi = detail::brioschi(rho2 * dot(a, a), rho2 * dot(a, b), rho2 * dot(b, b));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Singular set recovery on a grid (no admissibility required)

/// Singular set of a frontal on a rectangular grid.  A continuous unit normal
/// is propagated over the grid from the centre node (nu = +-N/|N| aligned with
/// its already visited neighbour), lambda = <N, nu> is sampled at the nodes and
/// every sign change along a grid edge is refined by bisection.
inline std::vector<std::array<double, 2>> singular_set_on_grid(const MapGerm& g, double u0, double u1, double v0,
                                                               double v1, int n) {
    auto normal_vec = [&](double u, double v) {
        const Vec3j F = g.jet(u, v, 1);
        return cross(partial(F, 1, 0), partial(F, 0, 1));
    };
    const std::vector<double> us = linspace(u0, u1, n), vs = linspace(v0, v1, n);
    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j); };
    std::vector<Vec3d> N(total), nu(total);
    parallel_for(n, [&](int i) {
        for (int j = 0; j < n; ++j) N[idx(i, j)] = normal_vec(us[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]);
    });
    double scale = 0.0;
    for (const Vec3d& x : N) scale = std::max(scale, norm(x));
    const double tiny = 1e-12 * std::max(scale, 1e-300);
    std::vector<char> seen(total, 0);
    std::vector<std::pair<int, int>> queue;
    const int c = n / 2;
    nu[idx(c, c)] = norm(N[idx(c, c)]) > tiny ? normalized(N[idx(c, c)]) : Vec3d{0, 0, 1};
    seen[idx(c, c)] = 1;
    queue.emplace_back(c, c);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [i, j] = queue[head];
        const Vec3d ref = nu[idx(i, j)];
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int a = i + di[k], b = j + dj[k];
            if (a < 0 || b < 0 || a >= n || b >= n || seen[idx(a, b)]) continue;
            const Vec3d x = N[idx(a, b)];
            Vec3d m = ref;
            if (norm(x) > tiny) {
                m = normalized(x);
                if (dot(m, ref) < 0) m = -1.0 * m;
            }
            nu[idx(a, b)] = m;
            seen[idx(a, b)] = 1;
            queue.emplace_back(a, b);
        }
    }
    std::vector<std::array<double, 2>> pts;
    auto refine = [&](double ua, double va, double ub, double vb, const Vec3d& ref) {
        auto lam = [&](double t) { return dot(normal_vec(ua + t * (ub - ua), va + t * (vb - va)), ref); };
        double ta = 0.0, tb = 1.0;
        const double fa = lam(0.0);
        for (int it = 0; it < 60; ++it) {
            const double tm = 0.5 * (ta + tb);
            if ((lam(tm) > 0) == (fa > 0)) ta = tm; else tb = tm;
        }
        const double t = 0.5 * (ta + tb);
        pts.push_back({ua + t * (ub - ua), va + t * (vb - va)});
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double l = dot(N[idx(i, j)], nu[idx(i, j)]);
            const double ui = us[static_cast<std::size_t>(i)], vj = vs[static_cast<std::size_t>(j)];
            if (i + 1 < n && l * dot(N[idx(i + 1, j)], nu[idx(i + 1, j)]) < 0)
                refine(ui, vj, us[static_cast<std::size_t>(i + 1)], vj, nu[idx(i, j)]);
            if (j + 1 < n && l * dot(N[idx(i, j + 1)], nu[idx(i, j + 1)]) < 0)
                refine(ui, vj, ui, vs[static_cast<std::size_t>(j + 1)], nu[idx(i, j)]);
        }
    return pts;
}

// ---------------------------------------------------------------------------
// Tail-part of a swallowtail in admissible form

struct TailPart {
    int self_intersection_side = 0;  // sign of v on the side carrying the self-intersection
    int tail_side = 0;               // the other side
    std::vector<std::array<double, 2>> self_intersection_preimage;
};

/// Locate the self-intersection f(u1, v1) = f(u2, v2) near the base point by
/// Newton's method, for several u1, and report on which side of the singular
/// axis it lies.  The tail-part is the side free of self-intersections.
inline TailPart tail_part(const MapGerm& g, double scale = 0.05) {
    TailPart tp;
    int votes = 0;
    for (double u1 : {scale, -scale, 0.5 * scale, -0.5 * scale}) {
        for (int s : {1, -1}) {
            // unknowns x = (v1, u2, v2)
            Eigen::Vector3d x(s * u1 * u1 / 3.0, -u1, s * u1 * u1 / 3.0);
            bool ok = false;
            for (int it = 0; it < 60; ++it) {
                const Vec3j A = g.jet(u1, x(0), 1), B = g.jet(x(1), x(2), 1);
                const Vec3d r = values(A) - values(B);
                Eigen::Matrix3d J;
                const Vec3d a_v = partial(A, 0, 1), b_u = partial(B, 1, 0), b_v = partial(B, 0, 1);
                for (int k = 0; k < 3; ++k) {
                    J(k, 0) = a_v[k];
                    J(k, 1) = -b_u[k];
                    J(k, 2) = -b_v[k];
                }
                const Eigen::Vector3d rr(r.x, r.y, r.z);
                const Eigen::Vector3d dx = J.colPivHouseholderQr().solve(rr);
                x -= dx;
                if (!x.allFinite() || x.norm() > 10 * scale + 1.0) break;
                if (dx.norm() < 1e-14 && rr.norm() < 1e-12) {
                    ok = true;
                    break;
                }
            }
            if (!ok) continue;
            const double sep = std::hypot(x(1) - u1, x(2) - x(0));
            if (sep < 1e-3 * scale) continue;  // trivial solution
            tp.self_intersection_preimage.push_back({u1, x(0)});
            votes += x(0) > 0 ? 1 : -1;
            break;
        }
    }
    if (votes == 0) throw DomainError("no self-intersection found near the base point");
    tp.self_intersection_side = votes > 0 ? 1 : -1;
    tp.tail_side = -tp.self_intersection_side;
    return tp;
}

}  // namespace swallowkit
