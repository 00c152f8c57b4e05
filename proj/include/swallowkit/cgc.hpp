#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "field.hpp"
#include "frontal.hpp"
#include "jet.hpp"
#include "vec3.hpp"

namespace swallowkit {

// ---------------------------------------------------------------------------
// Radial profile: F'' + F'/r + sinh(2F)/2 = 0, F(1) = 0, F'(1) = 1.

struct RadialOptions {
    double r_min = 0.5;
    double r_max = 1.6;
    double step = 1e-4;
    double blowup = 50.0;
};

class RadialProfile {
public:
    explicit RadialProfile(RadialOptions opt = {}) : opt_(opt) {
        if (!(opt.r_min > 0.0)) throw PreconditionError("radial domain must exclude r = 0");
        if (!(opt.r_min <= 1.0 && 1.0 <= opt.r_max)) throw PreconditionError("radial domain must contain r = 1");
        if (!(opt.step > 0.0)) throw PreconditionError("radial step must be positive");
        std::vector<Node> down = sweep(opt.r_min), up = sweep(opt.r_max);
        nodes_.assign(down.rbegin(), down.rend());
        nodes_.insert(nodes_.end(), up.begin() + 1, up.end());
    }

    static double second_derivative(double r, double F, double dF) { return -dF / r - 0.5 * std::sinh(2.0 * F); }

    double lo() const { return nodes_.front().r; }
    double hi() const { return nodes_.back().r; }
    double step() const { return opt_.step; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::size_t size() const { return nodes_.size(); }

    double F(double r) const { return hermite(r, &Node::F, &Node::dF, 0); }
    double dF(double r) const { return hermite(r, &Node::dF, &Node::d2F, 0); }
    double d2F(double r) const { return second_derivative(r, F(r), dF(r)); }

    /// F'' + F'/r + sinh(2F)/2 with F'' taken from the dense output of F'.
    double residual(double r) const {
        return hermite(r, &Node::dF, &Node::d2F, 1) + dF(r) / r + 0.5 * std::sinh(2.0 * F(r));
    }

    /// Exact Taylor series of F at r0 in the variable s = r - r0, stored as
    /// the u-part of a jet of order K.
    Jet2 series(double r0, int K) const {
        std::vector<double> c(static_cast<std::size_t>(K) + 2, 0.0);
        c[0] = F(r0);
        c[1] = dF(r0);
        const Jet2 S = Jet2::variable_u(K, 0.0);
        for (int k = 0; k + 2 <= K; ++k) {
            Jet2 f(K), df(K);
            for (int i = 0; i <= k + 1; ++i) f.at(i, 0) = c[static_cast<std::size_t>(i)];
            for (int i = 0; i <= k; ++i) df.at(i, 0) = (i + 1) * c[static_cast<std::size_t>(i) + 1];
            const Jet2 rhs = -df / (r0 + S) - 0.5 * sinh(2.0 * f);
            c[static_cast<std::size_t>(k) + 2] = rhs(k, 0) / ((k + 2.0) * (k + 1.0));
        }
        Jet2 out(K);
        for (int i = 0; i <= K; ++i) out.at(i, 0) = c[static_cast<std::size_t>(i)];
        return out;
    }

    /// sup |F_this - F_other| over the nodes of this profile inside both domains.
    double sup_difference(const RadialProfile& other) const {
        double m = 0.0;
        for (const Node& n : nodes_) {
            if (n.r < other.lo() || n.r > other.hi()) continue;
            m = std::max(m, std::abs(n.F - other.F(n.r)));
        }
        return m;
    }

private:
    struct Node {
        double r, F, dF, d2F;
    };

    std::vector<Node> sweep(double target) {
        std::vector<Node> out;
        double r = 1.0, F = 0.0, dF = 1.0;
        out.push_back({r, F, dF, second_derivative(r, F, dF)});
        const double dir = target >= 1.0 ? 1.0 : -1.0;
        auto rhs = [](double r, double y0, double y1) { return std::array<double, 2>{y1, second_derivative(r, y0, y1)}; };
        while (dir * (target - r) > 1e-14) {
            const double h = dir * std::min(opt_.step, dir * (target - r));
            const auto k1 = rhs(r, F, dF);
            const auto k2 = rhs(r + h / 2, F + h / 2 * k1[0], dF + h / 2 * k1[1]);
            const auto k3 = rhs(r + h / 2, F + h / 2 * k2[0], dF + h / 2 * k2[1]);
            const auto k4 = rhs(r + h, F + h * k3[0], dF + h * k3[1]);
            F += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
            dF += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
            r = std::abs(target - (r + h)) < 1e-12 ? target : r + h;
            if (!std::isfinite(F) || std::abs(F) > opt_.blowup) {
                warnings_.push_back("blow-up near r = " + std::to_string(r) + "; domain truncated");
                break;
            }
            out.push_back({r, F, dF, second_derivative(r, F, dF)});
        }
        return out;
    }

    // Cubic Hermite interpolation of (value, slope); returns the value or,
    // with derivative = 1, the slope of the interpolant.
    double hermite(double r, double Node::*y, double Node::*dy, int derivative) const {
        if (r < lo() - 1e-12 || r > hi() + 1e-12)
            throw DomainError("radius " + std::to_string(r) + " outside the solved range");
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r, [](double x, const Node& n) { return x < n.r; });
        if (it == nodes_.begin()) ++it;
        if (it == nodes_.end()) --it;
        const Node& a = *(it - 1);
        const Node& b = *it;
        const double h = b.r - a.r, t = (r - a.r) / h;
        const double y0 = a.*y, y1 = b.*y, m0 = a.*dy * h, m1 = b.*dy * h;
        if (derivative == 0) {
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
        }
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1) / h;
    }

    RadialOptions opt_;
    std::vector<Node> nodes_;
    std::vector<std::string> warnings_;
};

inline RadialProfile solve_radial_ode(double r_min, double r_max, double step = 1e-4) {
    return RadialProfile(RadialOptions{r_min, r_max, step});
}

/// Observed order of the integrator: log2 of the ratio of successive
/// differences under step halving.
inline double observed_order(double r_min, double r_max, double step) {
    const RadialProfile a = solve_radial_ode(r_min, r_max, step);
    const RadialProfile b = solve_radial_ode(r_min, r_max, step / 2);
    const RadialProfile c = solve_radial_ode(r_min, r_max, step / 4);
    return std::log2(a.sup_difference(b) / b.sup_difference(c));
}

// ---------------------------------------------------------------------------
// omega(u, v) = F(sqrt(u^2 + v^2))

class OmegaField {
public:
    explicit OmegaField(std::shared_ptr<const RadialProfile> profile) : profile_(std::move(profile)) {}

    const RadialProfile& profile() const { return *profile_; }

    Jet2 operator()(double u, double v, int K) const {
        const Jet2 U = Jet2::variable_u(K, u), V = Jet2::variable_v(K, v);
        const Jet2 R = sqrt(U * U + V * V);
        return profile_->series(R.value(), K).compose(R, V);
    }

    struct Value {
        double w, wu, wv;
    };
    Value value(double u, double v) const {
        const double r = std::hypot(u, v);
        const double d = profile_->dF(r) / r;
        return {profile_->F(r), u * d, v * d};
    }

    /// Laplacian of omega plus sinh(2 omega)/2.
    double pde_residual(double u, double v) const {
        const Jet2 w = (*this)(u, v, 2);
        return w.partial(2, 0) + w.partial(0, 2) + 0.5 * std::sinh(2.0 * w.value());
    }

private:
    std::shared_ptr<const RadialProfile> profile_;
};

// ---------------------------------------------------------------------------
// Fundamental forms.

/// Which second fundamental form and principal curvatures are used.
/// Printed: II = e^w (cosh u du^2 + sinh u dv^2), k1 = e^{-2w} cosh u,
///          k2 = e^{-2w} sinh u.
/// Integrable: II = e^w (cosh w du^2 + sinh w dv^2), k1 = e^{-w} cosh w,
///          k2 = e^{-w} sinh w; this pair satisfies the Gauss and Codazzi
///          equations for I = e^{2w}(du^2 + dv^2) and has mean curvature 1/2.
enum class CurvatureModel { Printed, Integrable };

inline const char* to_string(CurvatureModel m) { return m == CurvatureModel::Printed ? "printed" : "integrable"; }

struct FormValues {
    double E = 0, F = 0, G = 0, L = 0, M = 0, N = 0;
};

class FundamentalForms {
public:
    FundamentalForms(std::shared_ptr<const RadialProfile> profile, CurvatureModel model = CurvatureModel::Integrable)
        : omega_(std::move(profile)), model_(model) {}

    const OmegaField& omega() const { return omega_; }
    CurvatureModel model() const { return model_; }

    /// Conformal factor E = G = e^{2w} and the diagonal entries L, N as jets.
    struct Jets {
        Jet2 w, E, L, N;
    };
    Jets jets(double u, double v, int K) const {
        const Jet2 w = omega_(u, v, K);
        const Jet2 ew = exp(w);
        const Jet2 s = model_ == CurvatureModel::Printed ? Jet2::variable_u(K, u) : w;
        return {w, ew * ew, ew * cosh(s), ew * sinh(s)};
    }

    FormValues at(double u, double v) const {
        const auto o = omega_.value(u, v);
        const double ew = std::exp(o.w);
        const double s = model_ == CurvatureModel::Printed ? u : o.w;
        return {ew * ew, 0.0, ew * ew, ew * std::cosh(s), 0.0, ew * std::sinh(s)};
    }

    Jet2 lambda1(double u, double v, int K) const {
        const Jet2 w = omega_(u, v, K);
        if (model_ == CurvatureModel::Printed) return exp(-2.0 * w) * cosh(Jet2::variable_u(K, u));
        return exp(-w) * cosh(w);
    }
    Jet2 lambda2(double u, double v, int K) const {
        const Jet2 w = omega_(u, v, K);
        if (model_ == CurvatureModel::Printed) return exp(-2.0 * w) * sinh(Jet2::variable_u(K, u));
        return exp(-w) * sinh(w);
    }

    /// |K_I - det II / det I| with K_I = -e^{-2w} (w_uu + w_vv).
    double gauss_residual(double u, double v) const {
        const Jets j = jets(u, v, 2);
        const double E = j.E.value();
        const double KI = -(j.w.partial(2, 0) + j.w.partial(0, 2)) / E;
        return std::abs(KI - j.L.value() * j.N.value() / (E * E));
    }

    /// Codazzi equations for diagonal forms with E = G:
    /// L_v = w_v (L + N), N_u = w_u (L + N).
    double codazzi_residual(double u, double v) const {
        const Jets j = jets(u, v, 1);
        const double s = j.L.value() + j.N.value();
        return std::max(std::abs(j.L.partial(0, 1) - j.w.partial(0, 1) * s),
                        std::abs(j.N.partial(1, 0) - j.w.partial(1, 0) * s));
    }

private:
    OmegaField omega_;
    CurvatureModel model_;
};

struct SwallowtailConditions {
    CurvatureModel model = CurvatureModel::Printed;
    double lambda1 = 0, lambda2 = 0;
    double lambda1_u = 0, lambda1_uu = 0, lambda1_v = 0;
};

/// Principal-curvature data at (0, 1): k1 = 1 there, k1 is critical along
/// the u-direction with non-zero second derivative, and transversal slope.
inline SwallowtailConditions check_swallowtail_conditions(const FundamentalForms& forms) {
    const Jet2 l1 = forms.lambda1(0.0, 1.0, 3), l2 = forms.lambda2(0.0, 1.0, 1);
    return {forms.model(), l1.value(), l2.value(), l1.partial(1, 0), l1.partial(2, 0), l1.partial(0, 1)};
}

// ---------------------------------------------------------------------------
// Surface reconstruction.

struct GridSpec {
    double u0 = -0.5, u1 = 0.5, v0 = 0.6, v1 = 1.4;
    int nu = 201, nv = 201;

    double du() const { return (u1 - u0) / (nu - 1); }
    double dv() const { return (v1 - v0) / (nv - 1); }
    double u(int i) const { return u0 + i * du(); }
    double v(int j) const { return v0 + j * dv(); }
};

struct SurfaceGrid {
    GridSpec grid;
    std::vector<Vec3d> f, fu, fv, normal;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * grid.nu + i; }
    const Vec3d& at(int i, int j) const { return f[index(i, j)]; }
};

struct ReconstructOptions {
    Point base{0.0, 1.0};
    int substeps = 2;
    double guard = 1e-5;
    int guard_samples = 21;
};

namespace detail {

struct FrameState {
    Vec3d f, P, Q, n;  // position, f_u, f_v, unit normal

    FrameState operator+(const FrameState& o) const { return {f + o.f, P + o.P, Q + o.Q, n + o.n}; }
    FrameState operator*(double s) const { return {f * s, P * s, Q * s, n * s}; }
};

// Gauss-Weingarten system for E = G = e^{2w}, F = M = 0.
inline FrameState frame_rhs(const FundamentalForms& forms, double u, double v, const FrameState& s, bool along_u) {
    const auto o = forms.omega().value(u, v);
    const FormValues fv = forms.at(u, v);
    if (along_u) {
        return {s.P, s.P * o.wu - s.Q * o.wv + s.n * fv.L, s.P * o.wv + s.Q * o.wu, s.P * (-fv.L / fv.E)};
    }
    return {s.Q, s.P * o.wv + s.Q * o.wu, s.Q * o.wv - s.P * o.wu + s.n * fv.N, s.Q * (-fv.N / fv.E)};
}

inline FrameState rk4_step(const FundamentalForms& forms, double u, double v, const FrameState& s, double h,
                           bool along_u) {
    auto at = [&](double t, const FrameState& x) {
        return along_u ? frame_rhs(forms, u + t, v, x, true) : frame_rhs(forms, u, v + t, x, false);
    };
    const FrameState k1 = at(0, s);
    const FrameState k2 = at(h / 2, s + k1 * (h / 2));
    const FrameState k3 = at(h / 2, s + k2 * (h / 2));
    const FrameState k4 = at(h, s + k3 * h);
    return s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6);
}

inline int grid_index(double x, double x0, double dx, int n, const char* what) {
    const double t = (x - x0) / dx;
    const int i = static_cast<int>(std::lround(t));
    if (i < 0 || i >= n || std::abs(t - i) > 1e-9)
        throw PreconditionError(std::string("base point is not on a grid ") + what + " line");
    return i;
}

}  // namespace detail

/// Largest Gauss and Codazzi residuals on an n x n subsample of the grid.
inline double integrability_residual(const FundamentalForms& forms, const GridSpec& g, int n = 21) {
    double m = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double u = g.u0 + (g.u1 - g.u0) * a / (n - 1), v = g.v0 + (g.v1 - g.v0) * b / (n - 1);
            m = std::max({m, forms.gauss_residual(u, v), forms.codazzi_residual(u, v)});
        }
    return m;
}

/// Integrates the frame equations along the line v = v_base and then along
/// each u = const line, starting from f = 0 and the frame
/// (e^w e1, e^w e2, e3) at the base point.
inline SurfaceGrid reconstruct_surface(const FundamentalForms& forms, const GridSpec& grid = {},
                                       const ReconstructOptions& opt = {}) {
    const double guard = integrability_residual(forms, grid, opt.guard_samples);
    if (!(guard < opt.guard))
        throw PreconditionError("integrability guard failed: Gauss/Codazzi residual " + std::to_string(guard));
    const int i0 = detail::grid_index(opt.base.u, grid.u0, grid.du(), grid.nu, "u");
    const int j0 = detail::grid_index(opt.base.v, grid.v0, grid.dv(), grid.nv, "v");

    SurfaceGrid s{grid, {}, {}, {}, {}};
    const std::size_t total = static_cast<std::size_t>(grid.nu) * grid.nv;
    s.f.resize(total);
    s.fu.resize(total);
    s.fv.resize(total);
    s.normal.resize(total);
    auto store = [&](int i, int j, const detail::FrameState& x) {
        const std::size_t k = s.index(i, j);
        s.f[k] = x.f;
        s.fu[k] = x.P;
        s.fv[k] = x.Q;
        s.normal[k] = x.n;
    };
    auto load = [&](int i, int j) {
        const std::size_t k = s.index(i, j);
        return detail::FrameState{s.f[k], s.fu[k], s.fv[k], s.normal[k]};
    };

    const double ew = std::exp(forms.omega().value(opt.base.u, opt.base.v).w);
    store(i0, j0, {{0, 0, 0}, {ew, 0, 0}, {0, ew, 0}, {0, 0, 1}});

    const int m = std::max(1, opt.substeps);
    auto march = [&](int i, int j, int di, int dj) {
        detail::FrameState x = load(i, j);
        const bool along_u = di != 0;
        const double h = (along_u ? grid.du() * di : grid.dv() * dj) / m;
        double u = grid.u(i), v = grid.v(j);
        for (int k = 0; k < m; ++k) {
            x = detail::rk4_step(forms, u, v, x, h, along_u);
            (along_u ? u : v) += h;
        }
        store(i + di, j + dj, x);
    };
    for (int i = i0; i + 1 < grid.nu; ++i) march(i, j0, 1, 0);
    for (int i = i0; i > 0; --i) march(i, j0, -1, 0);
    for (int i = 0; i < grid.nu; ++i) {
        for (int j = j0; j + 1 < grid.nv; ++j) march(i, j, 0, 1);
        for (int j = j0; j > 0; --j) march(i, j, 0, -1);
    }
    return s;
}

// Fourth-order central differences on the sampled immersion.
struct GridDerivatives {
    Vec3d u, v, uu, uv, vv;
};

inline GridDerivatives grid_derivatives(const SurfaceGrid& s, int i, int j) {
    if (i < 2 || j < 2 || i > s.grid.nu - 3 || j > s.grid.nv - 3)
        throw DomainError("finite differences need two grid points on every side");
    const double hu = s.grid.du(), hv = s.grid.dv();
    auto f = [&](int a, int b) { return s.at(i + a, j + b); };
    auto d1 = [](const Vec3d& m2, const Vec3d& m1, const Vec3d& p1, const Vec3d& p2, double h) {
        return (m2 - p2 + (p1 - m1) * 8.0) * (1.0 / (12.0 * h));
    };
    auto d2 = [](const Vec3d& m2, const Vec3d& m1, const Vec3d& c, const Vec3d& p1, const Vec3d& p2, double h) {
        return ((m1 + p1) * 16.0 - (m2 + p2) - c * 30.0) * (1.0 / (12.0 * h * h));
    };
    GridDerivatives d;
    d.u = d1(f(-2, 0), f(-1, 0), f(1, 0), f(2, 0), hu);
    d.v = d1(f(0, -2), f(0, -1), f(0, 1), f(0, 2), hv);
    d.uu = d2(f(-2, 0), f(-1, 0), f(0, 0), f(1, 0), f(2, 0), hu);
    d.vv = d2(f(0, -2), f(0, -1), f(0, 0), f(0, 1), f(0, 2), hv);
    auto du_at = [&](int b) { return d1(f(-2, b), f(-1, b), f(1, b), f(2, b), hu); };
    d.uv = d1(du_at(-2), du_at(-1), du_at(1), du_at(2), hv);
    return d;
}

/// Fundamental forms of the sampled surface at a grid node, using the stored
/// unit normal.
inline FormValues sampled_forms(const SurfaceGrid& s, int i, int j) {
    const GridDerivatives d = grid_derivatives(s, i, j);
    const Vec3d& n = s.normal[s.index(i, j)];
    return {dot(d.u, d.u), dot(d.u, d.v), dot(d.v, d.v), dot(d.uu, n), dot(d.uv, n), dot(d.vv, n)};
}

inline double gaussian_curvature(const FormValues& f) { return (f.L * f.N - f.M * f.M) / (f.E * f.G - f.F * f.F); }
inline double mean_curvature(const FormValues& f) {
    return (f.L * f.G - 2 * f.M * f.F + f.N * f.E) / (2 * (f.E * f.G - f.F * f.F));
}

struct RoundTrip {
    double first_form = 0;      // relative error of E, G and |F|/E
    double second_form = 0;     // absolute error of L, M, N
    double orthogonality = 0;   // max |<f_u, f_v>| / e^{2w}
    double mean_curvature = 0;  // max |H - 1/2|
    double frame = 0;           // max deviation of the integrated frame from the forms
};

inline RoundTrip round_trip(const SurfaceGrid& s, const FundamentalForms& forms) {
    RoundTrip r;
    const GridSpec& g = s.grid;
    for (int j = 2; j < g.nv - 2; ++j)
        for (int i = 2; i < g.nu - 2; ++i) {
            const FormValues want = forms.at(g.u(i), g.v(j));
            const FormValues got = sampled_forms(s, i, j);
            r.first_form = std::max({r.first_form, std::abs(got.E - want.E) / want.E,
                                     std::abs(got.G - want.G) / want.G});
            r.orthogonality = std::max(r.orthogonality, std::abs(got.F) / want.E);
            r.second_form = std::max({r.second_form, std::abs(got.L - want.L), std::abs(got.M),
                                      std::abs(got.N - want.N)});
            r.mean_curvature = std::max(r.mean_curvature, std::abs(mean_curvature(got) - 0.5));
            const std::size_t k = s.index(i, j);
            r.frame = std::max({r.frame, std::abs(dot(s.fu[k], s.fu[k]) - want.E) / want.E,
                                std::abs(dot(s.fu[k], s.fv[k])) / want.E, std::abs(norm(s.normal[k]) - 1.0)});
        }
    r.first_form = std::max(r.first_form, r.orthogonality);
    return r;
}

/// The parallel surface h = f + nu at unit distance.  It shares the unit
/// normal of f; the stored tangent frame stays that of f.
inline SurfaceGrid parallel_surface(const SurfaceGrid& s) {
    SurfaceGrid h = s;
    for (std::size_t k = 0; k < h.f.size(); ++k) h.f[k] = s.f[k] + s.normal[k];
    return h;
}

struct ParallelReport {
    int samples = 0;
    double max_curvature_error = 0;  // max |K_h - 1| over the regular samples
    int singular_nodes = 0;          // interior nodes next to a sign change of det(h_u, h_v, nu)
    double max_singular_offset = 0;  // max |r - 1| over those nodes
    int other_singular_nodes = 0;    // singular nodes farther than 0.05 from the circle r = 1
};

/// Curvature of the parallel surface at `samples` interior nodes where
/// |1 - k1| > margin and |1 - k2| > margin, plus a rank check of dh: a node
/// counts as singular when the oriented area element of h changes sign
/// towards a neighbour or is below rank_tol relative to |h_u||h_v|.
inline ParallelReport check_parallel_surface(const SurfaceGrid& h, const FundamentalForms& forms, int samples = 50,
                                             double margin = 0.1, double rank_tol = 1e-3) {
    ParallelReport rep;
    const GridSpec& g = h.grid;
    std::vector<double> area(h.f.size(), 0.0);
    for (int j = 2; j < g.nv - 2; ++j)
        for (int i = 2; i < g.nu - 2; ++i) {
            const GridDerivatives d = grid_derivatives(h, i, j);
            const double scale = norm(d.u) * norm(d.v);
            area[h.index(i, j)] = scale > 0.0 ? det(d.u, d.v, h.normal[h.index(i, j)]) / scale : 0.0;
        }
    std::vector<std::pair<int, int>> regular;
    for (int j = 2; j < g.nv - 2; ++j)
        for (int i = 2; i < g.nu - 2; ++i) {
            const double u = g.u(i), v = g.v(j);
            const double k1 = forms.lambda1(u, v, 0).value(), k2 = forms.lambda2(u, v, 0).value();
            if (std::abs(1 - k1) > margin && std::abs(1 - k2) > margin) regular.emplace_back(i, j);
            const double a = area[h.index(i, j)];
            bool singular = std::abs(a) < rank_tol;
            if (i + 1 < g.nu - 2 && a * area[h.index(i + 1, j)] <= 0.0) singular = true;
            if (j + 1 < g.nv - 2 && a * area[h.index(i, j + 1)] <= 0.0) singular = true;
            if (singular) {
                ++rep.singular_nodes;
                const double off = std::abs(std::hypot(u, v) - 1.0);
                rep.max_singular_offset = std::max(rep.max_singular_offset, off);
                if (off > 0.05) ++rep.other_singular_nodes;
            }
        }
    if (regular.empty()) return rep;
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(samples), regular.size());
    for (std::size_t k = 0; k < n; ++k) {
        const auto [i, j] = regular[k * regular.size() / n];
        rep.max_curvature_error =
            std::max(rep.max_curvature_error, std::abs(gaussian_curvature(sampled_forms(h, i, j)) - 1.0));
        ++rep.samples;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Local germ of the parallel surface at the base point.

namespace detail {

inline Jet2 integral_u(const Jet2& a) {
    const int K = a.order();
    Jet2 r(K);
    for (int n = 0; n < K; ++n)
        for (int i = 0; i <= n; ++i) r.at(i + 1, n - i) = a(i, n - i) / (i + 1);
    return r;
}

inline Jet2 integral_v(const Jet2& a) {
    const int K = a.order();
    Jet2 r(K);
    for (int n = 0; n < K; ++n)
        for (int j = 0; j <= n; ++j) r.at(n - j, j + 1) = a(n - j, j) / (j + 1);
    return r;
}

inline Vec3j integral_u(const Vec3j& a) { return a.map([](const Jet2& c) { return integral_u(c); }); }
inline Vec3j integral_v(const Vec3j& a) { return a.map([](const Jet2& c) { return integral_v(c); }); }

}  // namespace detail

/// Taylor jets at the base point of the immersion, its normal and the
/// parallel surface, obtained by Picard iteration of the frame equations on
/// truncated power series.  Positions are relative to f(base) = 0.
struct SurfaceJets {
    Vec3j f, normal, parallel;
};

inline SurfaceJets surface_jets(const FundamentalForms& forms, Point base = {0.0, 1.0}, int K = kMaxJetOrder) {
    const FundamentalForms::Jets c = forms.jets(base.u, base.v, std::min(K + 1, kMaxJetOrder));
    const Jet2 w = c.w.truncated(K + 1);
    const Jet2 wu = w.derivative_u().truncated(K), wv = w.derivative_v().truncated(K);
    const Jet2 E = c.E.truncated(K), L = c.L.truncated(K), N = c.N.truncated(K);
    const Jet2 LE = L / E, NE = N / E;
    const double ew = std::exp(w.value());
    const Vec3j P0 = constant_jet({ew, 0, 0}, K), Q0 = constant_jet({0, ew, 0}, K), n0 = constant_jet({0, 0, 1}, K);
    Vec3j P = P0, Q = Q0, n = n0;
    for (int it = 0; it <= K; ++it) {
        const Vec3j Pu = wu * P - wv * Q + L * n, Qu = wv * P + wu * Q, nu = -1.0 * (LE * P);
        const Vec3j Pv = wv * P + wu * Q, Qv = wv * Q - wu * P + N * n, nv = -1.0 * (NE * Q);
        P = P0 + detail::integral_u(restrict_to_axis(Pu)) + detail::integral_v(Pv);
        Q = Q0 + detail::integral_u(restrict_to_axis(Qu)) + detail::integral_v(Qv);
        n = n0 + detail::integral_u(restrict_to_axis(nu)) + detail::integral_v(nv);
    }
    const Vec3j f = detail::integral_u(restrict_to_axis(P)) + detail::integral_v(Q);
    return {f, n, f + n};
}

/// Polynomial germ of the parallel surface in polar-type coordinates
/// (s, t) -> ((1 + t) sin s, (1 + t) cos s) around (0, 1); the circle r = 1,
/// which carries the singular set, becomes the s-axis.
inline MapGerm parallel_surface_germ(const FundamentalForms& forms, int K = kMaxJetOrder) {
    const SurfaceJets sj = surface_jets(forms, {0.0, 1.0}, K);
    const Jet2 s = Jet2::variable_u(K, 0.0), t = Jet2::variable_v(K, 0.0);
    const Jet2 U = (1.0 + t) * sin(s), V = (1.0 + t) * cos(s);
    const Vec3j H = sj.parallel.map([&](const Jet2& c) { return c.compose(U, V); });
    auto poly = [&](const Jet2& c) {
        Polynomial p;
        for (int n = 0; n <= K; ++n)
            for (int j = 0; j <= n; ++j)
                if (c(n - j, j) != 0.0) p[{n - j, j}] = c(n - j, j);
        return from_polynomial(p);
    };
    MapGerm g;
    g.f = SymField(Vec3Expr{poly(H.x), poly(H.y), poly(H.z)});
    g.label = "parallel surface at (0,1), polar coordinates";
    return g;
}

}  // namespace swallowkit
