#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "builder.hpp"
#include "curves.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "frontal.hpp"
#include "numerics.hpp"
#include "sign.hpp"

namespace swallowkit {

enum class Recipe {
    GenericSwallowtails,     // generic swallowtails with equal sign pair
    FlipSigmaS,              // sigma_S from -1 to +1 by scaling b
    MakeGeneric,             // sigma_S from 0 to +1
    RaiseCuspDeterminant,    // bend xi until det(xi, xi', xi'')(0) is large enough
    AnySwallowtails,         // arbitrary swallowtails, through the generic case
    AsymptoticNormalForm,    // asymptotic data to (xi, 0, +-xi x xi')
    AsymptoticSwallowtails,  // asymptotic swallowtails, optionally keeping sgn K
};

inline const char* to_string(Recipe r) {
    switch (r) {
        case Recipe::GenericSwallowtails: return "generic-swallowtails";
        case Recipe::FlipSigmaS: return "flip-sigma-s";
        case Recipe::MakeGeneric: return "make-generic";
        case Recipe::RaiseCuspDeterminant: return "raise-cusp-determinant";
        case Recipe::AnySwallowtails: return "any-swallowtails";
        case Recipe::AsymptoticNormalForm: return "asymptotic-normal-form";
        case Recipe::AsymptoticSwallowtails: return "asymptotic-swallowtails";
    }
    return "";
}

enum class ClassPredicate { Swallowtail, GenericSwallowtail, AsymptoticSwallowtail };

inline const char* to_string(ClassPredicate p) {
    switch (p) {
        case ClassPredicate::Swallowtail: return "swallowtail";
        case ClassPredicate::GenericSwallowtail: return "generic-swallowtail";
        case ClassPredicate::AsymptoticSwallowtail: return "asymptotic-swallowtail";
    }
    return "";
}

using FamilyMember = std::variant<SwallowtailData, AsymptoticData>;

inline MapGerm build_member(const FamilyMember& m, double a = 0.0) {
    if (const auto* s = std::get_if<SwallowtailData>(&m)) return build(*s, a);
    return build_asymptotic(std::get<AsymptoticData>(m), a);
}

inline Discriminants discriminants(const FamilyMember& m) {
    return std::visit([](const auto& d) { return discriminants(d); }, m);
}

// ---------------------------------------------------------------------------
// Links between consecutive coordinate systems

/// A reparametrization p -> forward(p).  A germ g in the new coordinates is
/// related to the germ h in the old ones by g = h o forward.
struct Link {
    std::string name;
    CoordinateMap forward;
    CoordinateMap inverse;
    bool reverses_orientation = false;
};

inline Link inverted(const Link& l) { return {"inverse of " + l.name, l.inverse, l.forward, l.reverses_orientation}; }

namespace detail {

inline std::pair<Jet2, Jet2> apply_map(const CoordinateMap& outer, const std::pair<Jet2, Jet2>& inner, int K) {
    auto [U, V] = outer(inner.first.value(), inner.second.value(), K);
    return {U.compose(inner.first, inner.second), V.compose(inner.first, inner.second)};
}

}  // namespace detail

/// p -> outer.forward(inner.forward(p)).
inline Link composed(const Link& outer, const Link& inner) {
    CoordinateMap f = [o = outer.forward, i = inner.forward](double u, double v, int K) {
        return detail::apply_map(o, i(u, v, K), K);
    };
    CoordinateMap g = [o = outer.inverse, i = inner.inverse](double u, double v, int K) {
        return detail::apply_map(i, o(u, v, K), K);
    };
    return {outer.name + ", then " + inner.name, f, g, outer.reverses_orientation != inner.reverses_orientation};
}

inline std::pair<double, double> apply(const Link& l, double u, double v) {
    auto [U, V] = l.forward(u, v, 0);
    return {U.value(), V.value()};
}

/// max |next(p) - prev(link(p))| over an n x n grid of [-h, h]^2.
inline double link_residual(const MapGerm& prev, const MapGerm& next, const std::optional<Link>& link,
                            double half_width = 0.05, int n = 11) {
    double worst = 0.0;
    for (double u : linspace(-half_width, half_width, n))
        for (double v : linspace(-half_width, half_width, n)) {
            auto [pu, pv] = link ? apply(*link, u, v) : std::pair{u, v};
            worst = std::max(worst, norm(next(u, v) - prev(pu, pv)));
        }
    return worst;
}

// ---------------------------------------------------------------------------
// Families

struct Stage {
    std::string name;
    std::function<FamilyMember(double)> member;  // t in [0, 1]
    ClassPredicate predicate = ClassPredicate::Swallowtail;
    bool sigma_S_constant = true;
    bool delta_qr_constant = false;
    /// start germ of this stage = end germ of the previous one o link
    std::optional<Link> link{};
    /// Additional per-t verification; returns a failure message.
    std::function<std::optional<std::string>(double)> check{};
};

struct DeformationFamily {
    Recipe recipe = Recipe::GenericSwallowtails;
    double a = 0.0;
    std::vector<Stage> stages;
    std::optional<Link> entry;  // first start germ = first input germ o entry
    std::optional<Link> exit;   // last end germ = second input germ o exit
    bool track_curvature = false;
    std::vector<std::string> notes;

    /// Member at the global parameter t in [0, 1], stages traversed in equal shares.
    FamilyMember operator()(double t) const {
        if (stages.empty()) throw PreconditionError("empty deformation family");
        const auto n = static_cast<double>(stages.size());
        const double s = std::clamp(t, 0.0, 1.0) * n;
        const auto k = std::min(static_cast<std::size_t>(s), stages.size() - 1);
        return stages[k].member(s - static_cast<double>(k));
    }

    MapGerm germ(double t) const { return build_member((*this)(t), a); }
    MapGerm stage_germ(std::size_t k, double t) const { return build_member(stages.at(k).member(t), a); }
};

/// The same path traversed backwards.
inline DeformationFamily reversed(const DeformationFamily& f) {
    DeformationFamily r = f;
    r.stages.clear();
    for (std::size_t i = f.stages.size(); i-- > 0;) {
        Stage s = f.stages[i];
        s.member = [m = f.stages[i].member](double t) { return m(1.0 - t); };
        if (s.check) s.check = [c = f.stages[i].check](double t) { return c(1.0 - t); };
        s.link = i + 1 < f.stages.size() && f.stages[i + 1].link ? std::optional<Link>(inverted(*f.stages[i + 1].link))
                                                                   : std::nullopt;
        r.stages.push_back(std::move(s));
    }
    r.entry = f.exit;
    r.exit = f.entry;
    return r;
}

namespace detail {

/// Accumulates stages and the reparametrizations between them.
class Chain {
public:
    explicit Chain(Recipe recipe, double a) { family_.recipe = recipe; family_.a = a; }

    void add_link(const Link& l) { pending_ = pending_ ? composed(*pending_, l) : l; }

    void add_stage(Stage s) {
        if (family_.stages.empty())
            family_.entry = pending_;
        else
            s.link = pending_;
        pending_.reset();
        family_.stages.push_back(std::move(s));
    }

    void append(const DeformationFamily& f) {
        if (f.entry) add_link(*f.entry);
        for (std::size_t i = 0; i < f.stages.size(); ++i) {
            Stage s = f.stages[i];
            if (i > 0 && s.link) add_link(*s.link);
            s.link.reset();
            add_stage(std::move(s));
        }
        if (f.exit) add_link(inverted(*f.exit));
        family_.notes.insert(family_.notes.end(), f.notes.begin(), f.notes.end());
        family_.track_curvature = family_.track_curvature || f.track_curvature;
    }

    void note(std::string s) { family_.notes.push_back(std::move(s)); }
    void track_curvature() { family_.track_curvature = true; }

    DeformationFamily finish() {
        if (pending_) family_.exit = inverted(*pending_);
        pending_.reset();
        return family_;
    }

private:
    DeformationFamily family_;
    std::optional<Link> pending_;
};

inline SymField combine(double alpha, const SymField& A, double beta, const SymField& B) {
    if (beta == 0.0 && alpha == 1.0) return A;
    if (alpha == 0.0 && beta == 1.0) return B;
    if (A.expr && B.expr) return SymField(scale(Expr(alpha), *A.expr) + scale(Expr(beta), *B.expr));
    return SymField(add(scaled(alpha, A.f), scaled(beta, B.f)));
}

inline SymScalar scaled(double c, const SymScalar& q) {
    if (c == 1.0) return q;
    if (q.expr) return SymScalar(Expr(c) * *q.expr);
    return SymScalar(ScalarField([c, f = q.f](double u, double v, int K) { return c * f(u, v, K); }));
}

inline SymField zero_field() { return SymField(Vec3Expr{Expr(0.0), Expr(0.0), Expr(0.0)}); }

/// xi x xi' for a field depending on u only.
inline SymField cross_with_derivative(const SymField& xi) {
    if (xi.expr) return SymField(cross(*xi.expr, diff(*xi.expr, Var::U)));
    return SymField(VectorField([xi](double u, double, int K) {
        const auto j = axis_jets(xi, u, K);
        return cross(j.xi, j.d1);
    }));
}

inline SymField second_derivative(const SymField& xi) {
    if (xi.expr) return SymField(diff(diff(*xi.expr, Var::U), Var::U));
    return SymField(VectorField([xi](double u, double, int K) {
        const Vec3j x = restrict_to_axis(xi(u, 0.0, std::min(K + 2, kMaxJetOrder)));
        return derivative_u(derivative_u(x));
    }));
}

inline bool is_zero_scalar(const SymScalar& q) {
    if (q.expr) {
        if (auto p = to_polynomial(*q.expr)) return pruned(*p, 1e-15).empty();
    }
    for (double u : {-0.1, -0.05, 0.0, 0.05, 0.1})
        if (std::abs(value(q.f, u, 0.0)) > 1e-14) return false;
    return true;
}

inline Sign sign_checked(double x, const SignTolerance& tol, const std::string& what) {
    const Sign s = classify_sign(x, 1.0, tol);
    if (s == Sign::Indeterminate) throw PreconditionError("indeterminate sign of " + what);
    return s;
}

inline std::string sign_pair(Sign a, Sign b) { return "(" + to_string(a) + ", " + to_string(b) + ")"; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Reparametrizations of the data

/// Data in new coordinates together with the link to the old ones.
template <class Data>
struct Reparametrized {
    Data data;
    Link link;
};

inline Link reflection_link() {
    CoordinateMap m = [](double u, double v, int K) {
        return std::pair{-1.0 * Jet2::variable_u(K, u), Jet2::variable_v(K, v)};
    };
    return {"u -> -u", m, m, true};
}

namespace detail {

inline SymField reflect_field(const SymField& f, const CoordinateMap& m) {
    if (f.expr) return SymField(substitute(*f.expr, -Expr::u(), Expr::v()));
    return SymField(compose(f.f, m));
}

}  // namespace detail

/// The data of f(-u, v); both sigma0_S and sigma_S change sign.
inline Reparametrized<SwallowtailData> reflect_u(const SwallowtailData& d) {
    const Link l = reflection_link();
    SwallowtailData r{detail::reflect_field(d.xi, l.forward), detail::reflect_field(d.b, l.forward), {}};
    if (d.gamma) r.gamma = detail::reflect_field(d.gamma, l.forward);
    return {r, l};
}

inline Reparametrized<AsymptoticData> reflect_u(const AsymptoticData& d) {
    const Link l = reflection_link();
    SymScalar q;
    if (d.q.expr)
        q = SymScalar(-substitute(*d.q.expr, -Expr::u(), Expr::v()));
    else
        q = SymScalar(ScalarField([f = compose(d.q.f, l.forward)](double u, double v, int K) { return -1.0 * f(u, v, K); }));
    AsymptoticData r{detail::reflect_field(d.xi, l.forward), q, detail::reflect_field(d.r, l.forward), {}};
    if (d.gamma) r.gamma = detail::reflect_field(d.gamma, l.forward);
    return {r, l};
}

/// Half-arclength reparametrization u -> t(u) of the cusp together with the
/// rescaling of the transverse parameter that makes xi a unit field.
struct UnitSpeedChange {
    SymField xi;     // xi(t(u)) / |xi(t(u))|
    SymField gamma;  // gamma(t(u))
    ScalarField speed;  // c(u) = |xi(t(u))|
    Link link;       // (u, w) -> (t(u), w / c(u))
};

inline UnitSpeedChange unit_speed_change(const SymField& xi, const SymField& gamma_in) {
    const SymField gamma = gamma_in ? gamma_in : cusp_curve(xi);
    const NormalizedCurve nc = normalize_half_arclength(CurveGerm{gamma, -1.0, 1.0}, CuspFactorization{xi});
    ScalarField t_of_u = nc.param.t_of_u;
    VectorField x = xi.f;
    ScalarField speed = [x, t_of_u](double u, double, int K) {
        const Jet2 T = t_of_u(u, 0.0, K);
        const Jet2 V = Jet2::variable_v(K, 0.0);
        return restrict_to_axis(norm(x(T.value(), 0.0, K).map([&](const Jet2& c) { return c.compose(T, V); })));
    };
    CoordinateMap forward = [t_of_u, speed](double u, double w, int K) {
        return std::pair{t_of_u(u, 0.0, K), Jet2::variable_v(K, w) / speed(u, 0.0, K)};
    };
    CoordinateMap inverse = [x](double s, double v, int K) {
        const Jet2 U = detail::half_arclength_u(x, s, K);
        return std::pair{U, Jet2::variable_v(K, v) * restrict_to_axis(norm(x(s, 0.0, K)))};
    };
    return {nc.factor.xi, nc.curve.gamma, speed, Link{"unit-speed reparametrization", forward, inverse, false}};
}

namespace detail {

/// field(forward(u, w)) / c(u)^power
inline SymField transported(const SymField& f, const UnitSpeedChange& ch, int power) {
    VectorField g = compose(f.f, ch.link.forward);
    ScalarField c = ch.speed;
    return SymField(VectorField([g, c, power](double u, double w, int K) {
        return g(u, w, K) / pow(c(u, 0.0, K), power);
    }));
}

}  // namespace detail

/// Data with |xi| = 1 for the same germ, f-hat(u, w) = f(t(u), w / c(u)).
inline Reparametrized<SwallowtailData> normalize_unit_speed(const SwallowtailData& d) {
    const UnitSpeedChange ch = unit_speed_change(d.xi, d.gamma);
    return {SwallowtailData{ch.xi, detail::transported(d.b, ch, 2), ch.gamma}, ch.link};
}

/// Unit-speed form of asymptotic data with q = 0: r-hat = r(t, w/c) / c^3.
inline Reparametrized<AsymptoticData> normalize_unit_speed(const AsymptoticData& d) {
    if (!detail::is_zero_scalar(d.q)) throw PreconditionError("unit-speed normalization of asymptotic data needs q = 0");
    const UnitSpeedChange ch = unit_speed_change(d.xi, d.gamma);
    return {AsymptoticData{ch.xi, SymScalar(0.0), detail::transported(d.r, ch, 3), ch.gamma}, ch.link};
}

// ---------------------------------------------------------------------------
// Frame decomposition b = x1 xi + x2 xi' + x3 xi x xi'

/// Largest condition number of the frame (xi, xi', xi x xi') on [-h, h].
inline double frame_condition(const SymField& xi, double half_width, int samples = 11) {
    double worst = 0.0;
    for (double u : linspace(-half_width, half_width, samples)) {
        const auto j = detail::axis_jets(xi, u, 0);
        const Vec3d a = values(j.xi), b = values(j.d1), c = cross(a, b);
        Eigen::Matrix3d M;
        M << a.x, b.x, c.x, a.y, b.y, c.y, a.z, b.z, c.z;
        const Eigen::Vector3d s = M.jacobiSvd().singularValues();
        worst = std::max(worst, s(2) > 0 ? s(0) / s(2) : INFINITY);
    }
    return worst;
}

/// x3 = det(xi, xi', b) / |xi x xi'|^2.
inline ScalarField normal_component(const SwallowtailData& d) {
    SymField xi = d.xi;
    VectorField b = d.b.f;
    return [xi, b](double u, double v, int K) {
        const auto j = detail::axis_jets(xi, u, K);
        const Vec3j c = cross(j.xi, j.d1);
        const Vec3j B = b(u, v, order(c));
        return det(j.xi, j.d1, B) / dot(c, c);
    };
}

// ---------------------------------------------------------------------------
// Interpolation of unit fields through curvature and torsion

struct InterpolationOptions {
    double half_width = 0.25;  // working interval [-h, h] of the curve parameter
    double step = 1e-3;        // RK4 step of the Frenet integration
    int chebyshev_nodes = 40;
    double max_condition = 1e8;
};

/// Unit fields xi_t with curvature (1-t) k1 + t k2 and kappa^2 tau
/// interpolated linearly, so det(xi_t, xi_t', xi_t'')(0) is linear in t.
class CurveInterpolation {
public:
    CurveInterpolation(const SymField& unit1, const SymField& unit2, const InterpolationOptions& opt = {})
        : opt_(opt) {
        const SymField* units[2] = {&unit1, &unit2};
        const double h = opt.half_width;
        for (int i = 0; i < 2; ++i) {
            const FrenetData fd = frenet_data_of(*units[i], opt.step);
            frame_[i] = fd.initial;
            for (double u : linspace(-h, h, 41))
                if (!(value(fd.kappa.f, u, 0.0) > 0.0))
                    throw PreconditionError("curvature of the unit field vanishes on the working interval (u = " +
                                            std::to_string(u) + ")");
            kappa_[i] = ChebyshevSeries([&](double u) { return value(fd.kappa.f, u, 0.0); }, -h, h, opt.chebyshev_nodes);
            tau_[i] = ChebyshevSeries([&](double u) { return value(fd.tau.f, u, 0.0); }, -h, h, opt.chebyshev_nodes);
            const auto j = detail::axis_jets(*units[i], 0.0, 0);
            det_[i] = det(values(j.xi), values(j.d1), values(j.d2));
        }
    }

    double endpoint_determinant(int i) const { return det_[i]; }
    double expected_determinant(double t) const { return (1.0 - t) * det_[0] + t * det_[1]; }
    double fit_tail() const {
        return std::max({kappa_[0].tail(), kappa_[1].tail(), tau_[0].tail(), tau_[1].tail()});
    }

    FrenetCurves at(double t) const {
        auto k1 = kappa_[0], k2 = kappa_[1], t1 = tau_[0], t2 = tau_[1];
        ScalarField kappa = [=](double u, double, int K) {
            const Jet2 U = Jet2::variable_u(K, u);
            return (1.0 - t) * k1(U) + t * k2(U);
        };
        ScalarField tau = [=](double u, double, int K) {
            const Jet2 U = Jet2::variable_u(K, u);
            const Jet2 a = k1(U), b = k2(U);
            const Jet2 k = (1.0 - t) * a + t * b;
            return ((1.0 - t) * (a * a * t1(U)) + t * (b * b * t2(U))) / (k * k);
        };
        const FrenetData fd{SymScalar(kappa), SymScalar(tau), interpolate_frames(frame_[0], frame_[1], t), opt_.step};
        return integrate_frenet(fd, -opt_.half_width, opt_.half_width);
    }

private:
    InterpolationOptions opt_;
    ChebyshevSeries kappa_[2], tau_[2];
    Frame frame_[2];
    double det_[2] = {0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Recipes

struct DeformOptions {
    double a = 0.0;
    InterpolationOptions interpolation{};
    SignTolerance sign{};
    double determinant_tolerance = 1e-4;  // stage-2 cusp determinant vs its linear interpolation
};

inline std::pair<Sign, Sign> sign_pair_of(const SwallowtailData& d, const SignTolerance& tol = {}) {
    const Discriminants q = discriminants(d);
    return {detail::sign_checked(q.delta0, tol, "Delta0_S"), detail::sign_checked(q.delta1, tol, "Delta1_S")};
}

/// Deformation between generic swallowtails with the same (sigma0_S, sigma_S):
/// strip the tangential part of b, interpolate the unit fields, restore b.
inline DeformationFamily deform_generic_swallowtails(const SwallowtailData& d1, const SwallowtailData& d2,
                                                     const DeformOptions& opt = {}) {
    const auto s1 = sign_pair_of(d1, opt.sign), s2 = sign_pair_of(d2, opt.sign);
    for (const auto& [s, i] : {std::pair{s1, 1}, std::pair{s2, 2}})
        if (!is_definite(s.first) || !is_definite(s.second))
            throw PreconditionError("endpoint " + std::to_string(i) + " is not a generic swallowtail: (sigma0_S, sigma_S) = " +
                                    detail::sign_pair(s.first, s.second));
    if (s1 != s2)
        throw PreconditionError("sign mismatch between endpoints: " + detail::sign_pair(s1.first, s1.second) + " vs " +
                                detail::sign_pair(s2.first, s2.second));

    detail::Chain chain(Recipe::GenericSwallowtails, opt.a);
    if (link_residual(build(d1, opt.a), build(d2, opt.a), std::nullopt, 0.1, 11) <= 1e-14) {
        chain.add_stage(Stage{"constant family", [d1](double) { return FamilyMember(d1); }, ClassPredicate::GenericSwallowtail});
        chain.note("identical endpoints");
        return chain.finish();
    }
    SwallowtailData e1 = d1, e2 = d2;
    std::optional<Link> flip2;
    if (s1.first == Sign::Negative) {
        auto r1 = reflect_u(d1), r2 = reflect_u(d2);
        chain.add_link(r1.link);
        e1 = r1.data;
        e2 = r2.data;
        flip2 = r2.link;
        chain.note("u -> -u applied to both endpoints to make sigma0_S = +1");
    }
    const auto n1 = normalize_unit_speed(e1), n2 = normalize_unit_speed(e2);
    chain.add_link(n1.link);

    const double h = opt.interpolation.half_width;
    for (const auto* n : {&n1, &n2}) {
        const double cond = frame_condition(n->data.xi, h);
        std::ostringstream os;
        os << "frame condition number " << cond;
        chain.note(os.str());
        if (cond > opt.interpolation.max_condition) throw DomainError("frame (xi, xi', xi x xi') is ill-conditioned: " + os.str());
    }

    const SwallowtailData u1 = n1.data, u2 = n2.data;
    const ScalarField x1 = normal_component(u1), x2 = normal_component(u2);
    const SymField c1 = detail::cross_with_derivative(u1.xi), c2 = detail::cross_with_derivative(u2.xi);
    const SymField p1 = SymField(scaled(x1, c1.f)), p2 = SymField(scaled(x2, c2.f));
    // s = 0: the given b; s = 1: its normal part only.
    auto stripped = [=](int i, double s) {
        const SwallowtailData& u = i == 1 ? u1 : u2;
        if (s <= 0.0) return u;
        return SwallowtailData{u.xi, detail::combine(1.0 - s, u.b, s, i == 1 ? p1 : p2), u.gamma};
    };

    Stage strip{"remove tangential part of b (first endpoint)", [=](double t) { return FamilyMember(stripped(1, t)); },
                ClassPredicate::GenericSwallowtail};
    chain.add_stage(strip);

    auto interp = std::make_shared<const CurveInterpolation>(u1.xi, u2.xi, opt.interpolation);
    std::ostringstream fit;
    fit << "curvature/torsion fit tail " << interp->fit_tail();
    chain.note(fit.str());
    auto middle = [=](double t) -> FamilyMember {
        if (t <= 0.0) return stripped(1, 1.0);
        if (t >= 1.0) return stripped(2, 1.0);
        const FrenetCurves fc = interp->at(t);
        const ScalarField x = [x1, x2, t](double u, double v, int K) { return (1.0 - t) * x1(u, v, K) + t * x2(u, v, K); };
        const SymField c = detail::cross_with_derivative(fc.unit_tangent);
        return SwallowtailData{fc.unit_tangent, SymField(scaled(x, c.f)), fc.cusp_curve};
    };
    Stage curve{"interpolate curvature and torsion of the unit fields", middle, ClassPredicate::GenericSwallowtail};
    const double tol = opt.determinant_tolerance;
    curve.check = [=](double t) -> std::optional<std::string> {
        if (t <= 0.0 || t >= 1.0) return std::nullopt;
        const auto d = std::get<SwallowtailData>(middle(t));
        const auto j = detail::axis_jets(d.xi, 0.0, 0);
        const double got = det(values(j.xi), values(j.d1), values(j.d2));
        const double want = interp->expected_determinant(t);
        if (std::abs(got - want) <= tol) return std::nullopt;
        std::ostringstream os;
        os << "det(xi, xi', xi'')(0) = " << got << ", expected " << want;
        return os.str();
    };
    chain.add_stage(curve);

    Stage restore{"restore tangential part of b (second endpoint)",
                  [=](double t) { return FamilyMember(stripped(2, 1.0 - t)); }, ClassPredicate::GenericSwallowtail};
    chain.add_stage(restore);

    chain.add_link(inverted(n2.link));
    if (flip2) chain.add_link(inverted(*flip2));
    return chain.finish();
}

/// Scale b through 0 to -b: sigma_S goes from -1 to +1 while Delta0_S stays
/// positive, which needs det(xi, xi', xi'')(0) > 2 |Delta1_S|.
inline DeformationFamily flip_sigma_S(const SwallowtailData& d, const DeformOptions& opt = {}) {
    const Discriminants q = discriminants(d);
    const auto s = sign_pair_of(d, opt.sign);
    if (s.first != Sign::Positive || s.second != Sign::Negative)
        throw PreconditionError("flip_sigma_S needs (sigma0_S, sigma_S) = (+1, -1), got " + detail::sign_pair(s.first, s.second));
    if (!(q.cusp_determinant > 2.0 * std::abs(q.delta1) * (1.0 + 1e-9))) {
        std::ostringstream os;
        os << "scaling b through 0 crosses Delta0_S = 0: det(xi, xi', xi'')(0) = " << q.cusp_determinant
           << " must exceed 2|Delta1_S| = " << 2.0 * std::abs(q.delta1);
        throw PreconditionError(os.str());
    }
    detail::Chain chain(Recipe::FlipSigmaS, opt.a);
    Stage st{"scale b from b to -b",
             [d](double t) { return FamilyMember(SwallowtailData{d.xi, detail::combine(1.0 - 2.0 * t, d.b, 0.0, d.b), d.gamma}); },
             ClassPredicate::Swallowtail, false};
    chain.add_stage(st);
    return chain.finish();
}

/// Move b(o) off span{xi, xi'} towards c xi'': sigma_S goes from 0 to +1.
/// With c = 1/4, Delta0_S = D (1 - t/2) and Delta1_S = t D / 4.
inline DeformationFamily make_generic(const SwallowtailData& d, const DeformOptions& opt = {}, double target = 0.25) {
    const Discriminants q = discriminants(d);
    const Sign s1 = detail::sign_checked(q.delta1, opt.sign, "Delta1_S");
    if (s1 != Sign::Zero) throw PreconditionError("make_generic needs sigma_S = 0, got " + to_string(s1));
    const Sign s0 = detail::sign_checked(q.delta0, opt.sign, "Delta0_S");
    if (s0 == Sign::Zero)
        throw PreconditionError("not a swallowtail: Delta0_S = 0 (with sigma_S = 0 this means a non-generic cusp)");
    if (s0 != Sign::Positive) throw PreconditionError("make_generic needs sigma0_S = +1");
    const SymField x2 = detail::second_derivative(d.xi);
    detail::Chain chain(Recipe::MakeGeneric, opt.a);
    Stage st{"move b towards a multiple of xi''",
             [d, x2, target](double t) { return FamilyMember(SwallowtailData{d.xi, detail::combine(1.0 - t, d.b, t * target, x2), d.gamma}); },
             ClassPredicate::Swallowtail, false};
    chain.add_stage(st);
    return chain.finish();
}

/// xi + s k u^2 m with m = (xi x xi')(0) / |xi x xi'|^2: the cusp
/// determinant grows linearly to `target`, xi(0), xi'(0) and b are kept.
inline DeformationFamily raise_cusp_determinant(const SwallowtailData& d, double target, const DeformOptions& opt = {}) {
    const Discriminants q = discriminants(d);
    if (target <= q.cusp_determinant) throw PreconditionError("target cusp determinant must exceed the current one");
    const auto j = detail::axis_jets(d.xi, 0.0, 0);
    const Vec3d c = cross(values(j.xi), values(j.d1));
    const Vec3d m = c / dot(c, c);
    const double k = 0.5 * (target - q.cusp_determinant);
    auto member = [d, m, k](double s) -> FamilyMember {
        if (s <= 0.0) return d;
        SymField xi;
        if (d.xi.expr) {
            const Expr w = Expr(s * k) * pow(Expr::u(), 2);
            xi = SymField(*d.xi.expr + scale(w, Vec3Expr{Expr(m.x), Expr(m.y), Expr(m.z)}));
        } else {
            xi = SymField(VectorField([f = d.xi.f, m, k, s](double u, double v, int K) {
                const Jet2 U = Jet2::variable_u(K, u);
                return f(u, v, K) + (s * k) * (U * U) * m;
            }));
        }
        return SwallowtailData{xi, d.b, {}};
    };
    detail::Chain chain(Recipe::RaiseCuspDeterminant, opt.a);
    const bool generic = classify_sign(q.delta1, 1.0, opt.sign) != Sign::Zero;
    chain.add_stage(Stage{"raise det(xi, xi', xi'')(0)", member,
                          generic ? ClassPredicate::GenericSwallowtail : ClassPredicate::Swallowtail, true});
    return chain.finish();
}

struct PreparedEndpoint {
    DeformationFamily family;  // from the input to `end`
    SwallowtailData end;       // (sigma0_S, sigma_S) = (+1, +1)
};

/// Route from an arbitrary swallowtail to a generic one with signs (+1, +1).
inline PreparedEndpoint prepare_endpoint(const SwallowtailData& d, const DeformOptions& opt = {}) {
    detail::Chain chain(Recipe::AnySwallowtails, opt.a);
    SwallowtailData cur = d;
    Discriminants q = discriminants(cur);
    const Sign s0 = detail::sign_checked(q.delta0, opt.sign, "Delta0_S");
    if (s0 == Sign::Zero) throw PreconditionError("endpoint is not a swallowtail: Delta0_S = 0");
    if (s0 == Sign::Negative) {
        auto r = reflect_u(cur);
        chain.add_link(r.link);
        cur = r.data;
        q = discriminants(cur);
    }
    auto end_of = [](const DeformationFamily& f) { return std::get<SwallowtailData>(f.stages.back().member(1.0)); };
    const Sign s1 = detail::sign_checked(q.delta1, opt.sign, "Delta1_S");
    if (s1 == Sign::Zero) {
        const auto f = make_generic(cur, opt);
        chain.append(f);
        cur = end_of(f);
    } else if (s1 == Sign::Negative) {
        if (!(q.cusp_determinant > 2.0 * std::abs(q.delta1) * (1.0 + 1e-6))) {
            const auto f = raise_cusp_determinant(cur, 4.0 * std::abs(q.delta1), opt);
            chain.append(f);
            cur = end_of(f);
        }
        const auto f = flip_sigma_S(cur, opt);
        chain.append(f);
        cur = end_of(f);
    }
    return {chain.finish(), cur};
}

/// Deformation between arbitrary swallowtails: each endpoint is moved to a
/// generic swallowtail with signs (+1, +1), and those are joined.
inline DeformationFamily deform_swallowtails(const SwallowtailData& d1, const SwallowtailData& d2, const DeformOptions& opt = {}) {
    PreparedEndpoint p1 = [&] {
        try {
            return prepare_endpoint(d1, opt);
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string("endpoint 1: ") + e.what());
        }
    }();
    PreparedEndpoint p2 = [&] {
        try {
            return prepare_endpoint(d2, opt);
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string("endpoint 2: ") + e.what());
        }
    }();
    detail::Chain chain(Recipe::AnySwallowtails, opt.a);
    chain.append(p1.family);
    chain.append(deform_generic_swallowtails(p1.end, p2.end, opt));
    chain.append(reversed(p2.family));
    return chain.finish();
}

/// Deformation of asymptotic data with sigma0_S = +1 and Delta_{q,r}(o) != 0
/// to (xi, 0, e xi x xi'), e = sgn Delta_{q,r}(o), keeping the sign of Delta_{q,r}.
inline DeformationFamily deform_to_asymptotic_normal_form(const AsymptoticData& d, const DeformOptions& opt = {}) {
    const Discriminants q = discriminants(d);
    if (detail::sign_checked(q.cusp_determinant, opt.sign, "det(xi, xi', xi'')(0)") != Sign::Positive)
        throw PreconditionError("needs sigma0_S = +1 (det(xi, xi', xi'')(0) > 0)");
    const double dqr = delta_qr(d, 0.0, 0.0);
    const Sign e = detail::sign_checked(dqr, opt.sign, "Delta_{q,r}(o)");
    if (e == Sign::Zero) throw PreconditionError("Delta_{q,r}(o) = 0: the data are not curved at o");
    const SymField c = detail::cross_with_derivative(d.xi);
    detail::Chain chain(Recipe::AsymptoticNormalForm, opt.a);
    Stage st;
    st.predicate = ClassPredicate::AsymptoticSwallowtail;
    st.delta_qr_constant = true;
    if (e == Sign::Positive) {
        st.name = "scale (q, r) to (0, xi x xi')";
        st.member = [d, c](double t) -> FamilyMember {
            if (t <= 0.0) return d;
            return AsymptoticData{d.xi, detail::scaled(1.0 - t, d.q), detail::combine(1.0 - t, d.r, t, c), d.gamma};
        };
        chain.note("branch Delta_{q,r}(o) > 0 (then det(xi, xi', r(o)) > 0)");
    } else {
        st.name = "scale (q, r) to (0, -xi x xi')";
        st.member = [d, c](double t) -> FamilyMember {
            if (t <= 0.0) return d;
            return AsymptoticData{d.xi, detail::scaled(std::sqrt(std::max(0.0, 1.0 - t)), d.q), detail::combine(1.0 - t, d.r, -t, c), d.gamma};
        };
        chain.note("branch Delta_{q,r}(o) < 0");
    }
    chain.add_stage(st);
    chain.track_curvature();
    return chain.finish();
}

/// Sign of the Gaussian curvature near o: sgn(Delta_{q,r}(o) det(xi, xi', xi'')(0)).
inline Sign curvature_sign_of(const AsymptoticData& d, const SignTolerance& tol = {}) {
    const Sign s = classify_sign(delta_qr(d, 0.0, 0.0), 1.0, tol);
    return product(s, classify_sign(discriminants(d).cusp_determinant, 1.0, tol));
}

/// Deformation between asymptotic swallowtails with equal sigma0_S.  With
/// keep_curvature_sign both must be curved with the same sign of K.
inline DeformationFamily deform_asymptotic_swallowtails(const AsymptoticData& d1, const AsymptoticData& d2,
                                                        bool keep_curvature_sign, const DeformOptions& opt = {}) {
    Sign s[2], k[2];
    const AsymptoticData* in[2] = {&d1, &d2};
    for (int i = 0; i < 2; ++i) {
        s[i] = detail::sign_checked(discriminants(*in[i]).cusp_determinant, opt.sign, "det(xi, xi', xi'')(0)");
        if (s[i] == Sign::Zero)
            throw PreconditionError("endpoint " + std::to_string(i + 1) + " is not a swallowtail (non-generic cusp)");
        k[i] = curvature_sign_of(*in[i], opt.sign);
    }
    if (s[0] != s[1]) throw PreconditionError("sigma0_S mismatch between endpoints");
    int e = 0;
    if (keep_curvature_sign) {
        if (!is_definite(k[0]) || !is_definite(k[1]))
            throw PreconditionError("curvature sign requested but Delta_{q,r}(o) = 0 at an endpoint");
        if (k[0] != k[1]) throw PreconditionError("mixed curvature signs: " + to_string(k[0]) + " vs " + to_string(k[1]));
        e = to_int(k[0]);
    }

    detail::Chain chain(Recipe::AsymptoticSwallowtails, opt.a);
    AsymptoticData e1 = d1, e2 = d2;
    std::optional<Link> flip2;
    if (s[0] == Sign::Negative) {
        auto r1 = reflect_u(d1), r2 = reflect_u(d2);
        chain.add_link(r1.link);
        e1 = r1.data;
        e2 = r2.data;
        flip2 = r2.link;
        chain.note("u -> -u applied to both endpoints to make sigma0_S = +1");
    }

    // From the data to (xi-hat, 0, e xi-hat x xi-hat').
    auto prepare = [&](const AsymptoticData& d) -> std::pair<DeformationFamily, AsymptoticData> {
        detail::Chain c(Recipe::AsymptoticSwallowtails, opt.a);
        AsymptoticData cur = d;
        if (e != 0) {
            const auto f = deform_to_asymptotic_normal_form(d, opt);
            c.append(f);
            cur = std::get<AsymptoticData>(f.stages.back().member(1.0));
        } else {
            Stage st{"scale (q, r) to 0", [d](double t) -> FamilyMember {
                         if (t <= 0.0) return d;
                         return AsymptoticData{d.xi, detail::scaled(1.0 - t, d.q), detail::combine(1.0 - t, d.r, 0.0, d.r), d.gamma};
                     },
                     ClassPredicate::AsymptoticSwallowtail};
            c.add_stage(st);
            cur = AsymptoticData{d.xi, SymScalar(0.0), detail::zero_field(), d.gamma};
        }
        const auto n = normalize_unit_speed(cur);
        c.add_link(n.link);
        const SymField target = e == 0 ? detail::zero_field() : SymField(scaled(double(e), detail::cross_with_derivative(n.data.xi).f));
        const AsymptoticData nd = n.data;
        Stage st{"rescale r in unit-speed coordinates", [nd, target](double t) -> FamilyMember {
                     if (t <= 0.0) return nd;
                     if (t >= 1.0) return AsymptoticData{nd.xi, nd.q, target, nd.gamma};
                     return AsymptoticData{nd.xi, nd.q, detail::combine(1.0 - t, nd.r, t, target), nd.gamma};
                 },
                 ClassPredicate::AsymptoticSwallowtail, true, e != 0};
        c.add_stage(st);
        return {c.finish(), AsymptoticData{nd.xi, nd.q, target, nd.gamma}};
    };
    const auto [f1, end1] = prepare(e1);
    const auto [f2, end2] = prepare(e2);
    chain.append(f1);

    auto interp = std::make_shared<const CurveInterpolation>(end1.xi, end2.xi, opt.interpolation);
    Stage curve{"interpolate curvature and torsion of the unit fields",
                [=](double t) -> FamilyMember {
                    if (t <= 0.0) return end1;
                    if (t >= 1.0) return end2;
                    const FrenetCurves fc = interp->at(t);
                    const SymField r = e == 0 ? detail::zero_field()
                                              : SymField(scaled(double(e), detail::cross_with_derivative(fc.unit_tangent).f));
                    return AsymptoticData{fc.unit_tangent, SymScalar(0.0), r, fc.cusp_curve};
                },
                ClassPredicate::AsymptoticSwallowtail, true, e != 0};
    chain.add_stage(curve);
    chain.append(reversed(f2));
    if (flip2) chain.add_link(inverted(*flip2));
    if (e != 0) {
        chain.track_curvature();
        chain.note(std::string("curvature sign kept: ") + (e > 0 ? "positive" : "negative"));
    }
    return chain.finish();
}

// ---------------------------------------------------------------------------
// Certificates

struct CertificateOptions {
    int points = 21;  // per stage
    std::vector<double> axis_probes{-0.05, -0.01, 0.01, 0.05};
    std::vector<Point> curvature_probes{{-0.05, -0.005}, {-0.05, 0.005}, {0.0, -0.005},
                                        {0.0, 0.005},    {0.05, -0.005}, {0.05, 0.005}};
    double link_tolerance = 1e-9;
    double link_half_width = 0.05;
    int link_points = 11;
    ClassifyOptions classify{};
};

struct CertificateSample {
    std::size_t stage = 0;
    double t = 0.0;  // stage parameter
    double global_t = 0.0;
    SingularityReport report;
    bool predicate = false;
    std::vector<Sign> sigma_g_C;  // at the axis probes (asymptotic predicate)
    std::vector<Sign> curvature;  // at the curvature probes, when tracked
    std::optional<double> delta_qr;
    std::optional<std::string> error;
};

struct Certificate {
    std::string recipe;
    std::vector<std::string> stages;
    std::vector<ClassPredicate> predicates;
    std::vector<double> t_grid;
    std::vector<CertificateSample> samples;
    std::vector<double> link_residuals;  // between consecutive stages
    std::vector<std::string> notes;
    bool pass = false;
    std::vector<std::string> failures;
    std::string coverage = "verified on the sampled t-grid only; continuity between samples is not proven";
};

namespace detail {

inline CertificateSample evaluate_sample(const DeformationFamily& f, std::size_t k, double t, const CertificateOptions& opt) {
    CertificateSample s;
    s.stage = k;
    s.t = t;
    s.global_t = (static_cast<double>(k) + t) / static_cast<double>(f.stages.size());
    const Stage& st = f.stages[k];
    try {
        const FamilyMember m = st.member(t);
        const MapGerm g = build_member(m, f.a);
        s.report = classify(g, opt.classify);
        if (const auto* ad = std::get_if<AsymptoticData>(&m)) s.delta_qr = delta_qr(*ad, 0.0, 0.0);
        bool ok = s.report.is_swallowtail;
        if (st.predicate == ClassPredicate::GenericSwallowtail) ok = ok && is_definite(s.report.sigma_S);
        if (st.predicate == ClassPredicate::AsymptoticSwallowtail) {
            const NormalField nf = oriented_normal(g, opt.classify);
            for (double u : opt.axis_probes) {
                s.sigma_g_C.push_back(sigma_g_C(nf, u, opt.classify));
                ok = ok && s.sigma_g_C.back() == Sign::Zero;
            }
        }
        if (f.track_curvature)
            for (const Point& p : opt.curvature_probes)
                s.curvature.push_back(classify_sign(gaussian_curvature(g, p.u, p.v).K_ext, 1.0, opt.classify.sign));
        s.predicate = ok;
        if (st.check) s.error = st.check(t);
    } catch (const std::exception& e) {
        s.error = std::string("evaluation failed: ") + e.what();
    }
    return s;
}

inline std::string where(const Certificate& c, const CertificateSample& s) {
    std::ostringstream os;
    os << "stage " << s.stage + 1 << " (" << c.stages[s.stage] << "), t = " << s.t;
    return os.str();
}

}  // namespace detail

/// Sample every stage on a uniform t-grid and check the class predicate,
/// sign constancy and the links between stages.
inline Certificate certify(const DeformationFamily& f, const CertificateOptions& opt = {}) {
    Certificate c;
    c.recipe = to_string(f.recipe);
    c.notes = f.notes;
    c.t_grid = linspace(0.0, 1.0, opt.points);
    for (const Stage& s : f.stages) {
        c.stages.push_back(s.name);
        c.predicates.push_back(s.predicate);
    }
    if (f.stages.empty()) {
        c.failures.push_back("family has no stages");
        return c;
    }
    const std::size_t n = c.t_grid.size();
    c.samples.resize(f.stages.size() * n);
    parallel_for(c.samples.size(), [&](std::size_t i) {
        c.samples[i] = detail::evaluate_sample(f, i / n, c.t_grid[i % n], opt);
    });

    const CertificateSample* seg0 = nullptr;
    const CertificateSample* stage0 = nullptr;
    const CertificateSample* first_curv = nullptr;
    for (const CertificateSample& s : c.samples) {
        const Stage& st = f.stages[s.stage];
        if (s.t == c.t_grid.front()) {
            stage0 = &s;
            if (s.stage == 0 || (st.link && st.link->reverses_orientation)) seg0 = &s;
        }
        const std::string at = detail::where(c, s);
        if (s.error) {
            c.failures.push_back(at + ": " + *s.error);
            if (s.error->rfind("evaluation failed", 0) == 0) continue;
        }
        if (!s.predicate) c.failures.push_back(at + ": predicate " + to_string(st.predicate) + " fails");
        if (!is_definite(s.report.sigma0_S) || s.report.sigma0_S != seg0->report.sigma0_S)
            c.failures.push_back(at + ": sigma0_S = " + to_string(s.report.sigma0_S) + " differs from " +
                                 to_string(seg0->report.sigma0_S));
        if (st.sigma_S_constant && s.report.sigma_S != stage0->report.sigma_S)
            c.failures.push_back(at + ": sigma_S changed to " + to_string(s.report.sigma_S));
        if (st.delta_qr_constant && s.delta_qr && stage0->delta_qr) {
            const Sign a = classify_sign(*s.delta_qr, 1.0, opt.classify.sign);
            if (!is_definite(a) || a != classify_sign(*stage0->delta_qr, 1.0, opt.classify.sign))
                c.failures.push_back(at + ": sign of Delta_{q,r}(o) changed");
        }
        if (f.track_curvature && !s.curvature.empty()) {
            if (!first_curv) first_curv = &s;
            for (std::size_t p = 0; p < s.curvature.size(); ++p)
                if (!is_definite(s.curvature[p]) || s.curvature[p] != first_curv->curvature[p]) {
                    c.failures.push_back(at + ": sign of K_ext changed at probe " + std::to_string(p));
                    break;
                }
        }
    }

    for (std::size_t k = 1; k < f.stages.size(); ++k) {
        double r = INFINITY;
        try {
            r = link_residual(f.stage_germ(k - 1, 1.0), f.stage_germ(k, 0.0), f.stages[k].link, opt.link_half_width,
                              opt.link_points);
        } catch (const std::exception& e) {
            c.failures.push_back("link into stage " + std::to_string(k + 1) + " failed: " + e.what());
        }
        c.link_residuals.push_back(r);
        if (!(r <= opt.link_tolerance)) {
            std::ostringstream os;
            os << "link into stage " << k + 1 << " does not match the previous end germ (residual " << r << ")";
            c.failures.push_back(os.str());
        }
    }
    c.pass = c.failures.empty();
    return c;
}

// ---------------------------------------------------------------------------
// Homotopy of admissible coordinate changes

/// (u, v) as expressions in the new coordinates, written with the variables u, v.
struct CoordinateChange {
    Expr u;
    Expr v;
};

struct AdmissibilityCheck {
    bool pass = true;
    double min_u_xi = INFINITY;      // u_xi(xi, 0)
    double min_jacobian = INFINITY;  // det d(u, v)/d(xi, eta) on the grid
    double max_axis_offset = 0.0;    // |v(xi, 0)|
    std::vector<std::string> failures;
};

inline AdmissibilityCheck check_admissible(const CoordinateChange& c, double half_width = 0.1, int n = 11) {
    AdmissibilityCheck r;
    const double origin = std::hypot(eval(c.u, 0.0, 0.0), eval(c.v, 0.0, 0.0));
    if (origin > 1e-12) r.failures.push_back("the origin is not fixed");
    for (double x : linspace(-half_width, half_width, n)) {
        const Jet2 U = jet_eval(c.u, x, 0.0, 1);
        r.min_u_xi = std::min(r.min_u_xi, U(1, 0));
        r.max_axis_offset = std::max(r.max_axis_offset, std::abs(eval(c.v, x, 0.0)));
        for (double y : linspace(-half_width, half_width, n)) {
            const Jet2 A = jet_eval(c.u, x, y, 1), B = jet_eval(c.v, x, y, 1);
            r.min_jacobian = std::min(r.min_jacobian, A(1, 0) * B(0, 1) - A(0, 1) * B(1, 0));
        }
    }
    if (!(r.min_u_xi > 0.0)) r.failures.push_back("u_xi(xi, 0) > 0 fails");
    if (!(r.min_jacobian > 0.0)) r.failures.push_back("the Jacobian is not positive");
    if (r.max_axis_offset > 1e-12) r.failures.push_back("the axis eta = 0 is not mapped into v = 0");
    r.pass = r.failures.empty();
    return r;
}

/// u_t = alpha xi + t (u - alpha xi), v_t = beta eta + t (v - beta eta) with
/// alpha = u_xi(o), beta = v_eta(o): linear at t = 0, the given change at t = 1.
struct CoordinateHomotopy {
    double alpha = 1.0;
    double beta = 1.0;
    CoordinateChange change;

    CoordinateChange at(double t) const {
        const Expr x = Expr::u(), y = Expr::v();
        const Expr lu = Expr(alpha) * x, lv = Expr(beta) * y;
        if (t == 0.0) return {lu, lv};
        if (t == 1.0) return change;
        return {lu + Expr(t) * (change.u - lu), lv + Expr(t) * (change.v - lv)};
    }

    CoordinateMap map_at(double t) const {
        const CoordinateChange c = at(t);
        return [c](double u, double v, int K) { return std::pair{jet_eval(c.u, u, v, K), jet_eval(c.v, u, v, K)}; };
    }
};

inline CoordinateHomotopy coordinate_homotopy(const CoordinateChange& c, double half_width = 0.1, int n = 11) {
    const AdmissibilityCheck chk = check_admissible(c, half_width, n);
    if (!chk.pass) throw PreconditionError("coordinate change is not admissible: " + chk.failures.front());
    const Jet2 U = jet_eval(c.u, 0.0, 0.0, 1), V = jet_eval(c.v, 0.0, 0.0, 1);
    return {U(1, 0), V(0, 1), c};
}

/// Admissibility of every member on the t-grid.
inline AdmissibilityCheck certify(const CoordinateHomotopy& h, int points = 21, double half_width = 0.1, int n = 11) {
    AdmissibilityCheck all;
    for (double t : linspace(0.0, 1.0, points)) {
        const AdmissibilityCheck r = check_admissible(h.at(t), half_width, n);
        all.min_u_xi = std::min(all.min_u_xi, r.min_u_xi);
        all.min_jacobian = std::min(all.min_jacobian, r.min_jacobian);
        all.max_axis_offset = std::max(all.max_axis_offset, r.max_axis_offset);
        for (const auto& f : r.failures) all.failures.push_back("t = " + std::to_string(t) + ": " + f);
    }
    all.pass = all.failures.empty();
    return all;
}

}  // namespace swallowkit
