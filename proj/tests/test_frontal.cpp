#include <gtest/gtest.h>

#include <random>

#include "swallowkit/frontal.hpp"

using namespace swallowkit;

namespace {

MapGerm germ(const char* tuple, double a = 0.0, Point base = {0.0, 0.0}) {
    return MapGerm{SymField(parse_vec(tuple)), SpaceForm{a}, base, tuple};
}

constexpr const char* kStandardAdmissible = "(-6*u^2 - v, -4*u^3 - u*v, -3*u^4 - u^2*v)";
constexpr const char* kStandard = "(u, 2*v^3 + u*v, 3*v^4 + u*v^2)";
constexpr const char* kPlanarSwallowtail = "(u^2 + 2*v, u^3 + 3*u*v, v^2)";
constexpr const char* kPlanarFrontal = "(u^2 + 2*v, u^3 + 3*u*v, 2*u*v^2)";
constexpr const char* kPlus = "(u^2/2 + v + u^2*v^3, u^3/3 + u*v - 2*u*v^3, u^4/4 + u^2*v + v^3)";
constexpr const char* kMinus = "(u^2/2 + v - u^2*v^3, u^3/3 + u*v + 2*u*v^3, u^4/4 + u^2*v - v^3)";
constexpr const char* kParabolic = "(u^2/2 + v, u^3/3 + u*v + v^2/10, u^4/4 + u^2*v + u*v^2/5)";
constexpr const char* kDevelopable = "(u^2/2 + v, u^3/3 + u*v, u^4/4 + u^2*v)";

}  // namespace

TEST(Lambda, ImmersionNeverVanishes) {
    const NormalField nf = oriented_normal(germ("(u, v, 0)"));
    for (double u : {-0.3, 0.0, 0.4})
        for (double v : {-0.2, 0.0, 0.5}) {
            EXPECT_NEAR(std::abs(lambda_jet(nf, u, v, 3).value()), 1.0, 1e-14);
            // g_0 = 4 g_E: the metric lambda carries rho^2 = 4
            EXPECT_NEAR(std::abs(lambda_function(nf, u, v, 3).value()), 4.0, 1e-14);
        }
}

TEST(Lambda, PlanarSwallowtailDerivative) {
    const NormalField nf = oriented_normal(germ(kPlanarSwallowtail));
    const Jet2 lam = lambda_jet(nf, 0.0, 0.0, 5);
    EXPECT_NEAR(lam(0, 1), 36.0, 1e-12);
    EXPECT_NEAR(lam.value(), 0.0, 1e-14);
    for (double u : {-0.2, 0.1}) EXPECT_NEAR(lambda_function(nf, u, 0.0, 4).value(), 0.0, 1e-13);
}

TEST(Lambda, StandardSwallowtailSingularSetOnGrid) {
    const MapGerm g = germ(kStandard);
    const int n = 101;
    const double step = 0.4 / (n - 1);
    const auto pts = singular_set_on_grid(g, -0.2, 0.2, -0.2, 0.2, n);
    ASSERT_FALSE(pts.empty());
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::abs(p[0] + 6 * p[1] * p[1]) / std::hypot(1.0, 12 * p[1]));
    EXPECT_LT(worst, 2 * step);
    // every point of the true curve inside the window has a recovered point nearby
    double back = 0.0;
    for (double v = -0.18; v <= 0.18; v += 0.01) {
        double best = 1e9;
        for (const auto& p : pts) best = std::min(best, std::hypot(p[0] + 6 * v * v, p[1] - v));
        back = std::max(back, best);
    }
    EXPECT_LT(back, 2 * step);
}

TEST(Normal, OrthogonalAndUnit) {
    for (double a : {-1.0, 0.0, 1.0}) {
        const MapGerm g = germ(kPlanarSwallowtail, a);
        const NormalField nf = oriented_normal(g);
        for (double u : {-0.2, 0.05})
            for (double v : {-0.1, 0.0, 0.15}) {
                const Vec3j F = g.jet(u, v, 4);
                const Vec3d n = values(nf.unit(u, v, 4)), p = values(F);
                EXPECT_NEAR(metric(g.space, p, n, n), 1.0, 1e-12);
                EXPECT_NEAR(metric(g.space, p, n, partial(F, 1, 0)), 0.0, 1e-8);
                EXPECT_NEAR(metric(g.space, p, n, partial(F, 0, 1)), 0.0, 1e-8);
            }
    }
}

TEST(Normal, NonAdmissibleSingularBaseRejected) {
    EXPECT_THROW(classify(germ(kStandard)), DomainError);
}

TEST(Classify, StandardSwallowtail) {
    const SingularityReport r = classify(germ(kStandardAdmissible));
    EXPECT_EQ(r.kind, PointKind::SecondKind);
    EXPECT_TRUE(r.is_wavefront);
    EXPECT_TRUE(r.is_swallowtail);
    EXPECT_NE(r.sigma0_S, Sign::Zero);
}

TEST(Classify, PlanarSwallowtail) {
    const SingularityReport r = classify(germ(kPlanarSwallowtail));
    EXPECT_TRUE(r.is_swallowtail);
    EXPECT_EQ(r.sigma0_S, Sign::Negative);
    EXPECT_EQ(r.sigma_S, Sign::Positive);
    EXPECT_GT(r.kappa_nu, 0.0);
    EXPECT_LT(r.mu_C, 0.0);
    EXPECT_NEAR(r.lambda_v, 36.0, 1e-12);
    EXPECT_NEAR(std::abs(r.null_vector[0]), 1.0, 1e-12);
}

TEST(Classify, PlanarFrontal) {
    const SingularityReport r = classify(germ(kPlanarFrontal));
    EXPECT_TRUE(r.is_generalized_swallowtail);
    EXPECT_FALSE(r.is_wavefront);
    EXPECT_FALSE(r.is_swallowtail);
    EXPECT_EQ(r.sigma0_S, Sign::Zero);
    EXPECT_EQ(r.sigma_S, Sign::Zero);
    EXPECT_NEAR(r.mu_C, 0.0, 1e-12);
}

TEST(Classify, AsymptoticExample) {
    for (const char* text : {kPlus, kMinus}) {
        const SingularityReport r = classify(germ(text));
        EXPECT_TRUE(r.is_swallowtail);
        EXPECT_EQ(r.sigma0_S, Sign::Positive);
        EXPECT_EQ(r.sigma_S, Sign::Zero);
        EXPECT_NEAR(r.kappa_nu, 0.0, 1e-12);
        EXPECT_GT(r.mu_C, 0.0);
    }
}

TEST(Classify, CuspidalEdge) {
    const SingularityReport r = classify(germ("(u, v^2, v^3)", 0.0, {0.3, 0.0}));
    EXPECT_EQ(r.kind, PointKind::FirstKind);
    EXPECT_TRUE(r.is_cuspidal_edge);
    EXPECT_FALSE(r.is_swallowtail);
    const SingularityReport q = classify(germ("(u, v^2, v^4)", 0.0, {0.3, 0.0}));
    EXPECT_EQ(q.kind, PointKind::FirstKind);
    EXPECT_FALSE(q.is_wavefront);
}

TEST(Classify, RegularPoint) {
    const SingularityReport r = classify(germ(kPlanarSwallowtail, 0.0, {0.1, 0.2}));
    EXPECT_EQ(r.kind, PointKind::Regular);
    EXPECT_FALSE(r.is_singular);
}

TEST(Classify, ScalingHalvesLimitingNormalCurvature) {
    const double k1 = limiting_normal_curvature(germ(kPlanarSwallowtail));
    const double k2 = limiting_normal_curvature(germ("(2*u^2 + 4*v, 2*u^3 + 6*u*v, 2*v^2)"));
    EXPECT_NEAR(k2, k1 / 2.0, 1e-12);
}

TEST(Classify, SwallowtailIffSigma0NonZero) {
    for (const char* text : {kStandardAdmissible, kPlanarSwallowtail, kPlanarFrontal, kPlus, kMinus, kParabolic, kDevelopable}) {
        for (double a : {-1.0, 0.0, 1.0}) {
            const SingularityReport r = classify(germ(text, a));
            ASSERT_EQ(r.kind, PointKind::SecondKind) << text;
            EXPECT_EQ(r.is_swallowtail, r.sigma0_S != Sign::Zero) << text << " a=" << a;
            if (r.is_swallowtail) {
                EXPECT_TRUE(r.is_wavefront);
            }
        }
    }
}

TEST(Classify, SigmaGMetricIndependent) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> C(-1.0, 1.0);
    std::vector<std::string> corpus{kStandardAdmissible, kPlanarSwallowtail, kPlanarFrontal, kPlus, kMinus, kParabolic, kDevelopable};
    for (int n = 0; n < 20; ++n) {
        // gamma + v xi + v^2 b with xi = (1, u, c u^2), b = (b1, b2, b3 + b4 u)
        char buf[512];
        const double c = C(rng), b1 = C(rng), b2 = C(rng), b3 = C(rng), b4 = C(rng);
        std::snprintf(buf, sizeof buf,
                      "(u^2/2 + v + %.17g*v^2, u^3/3 + u*v + %.17g*v^2, %.17g*u^4/4 + %.17g*u^2*v + (%.17g + %.17g*u)*v^2)",
                      b1, b2, c, c, b3, b4);
        corpus.emplace_back(buf);
    }
    for (const auto& text : corpus) {
        const Sign s0 = classify(germ(text.c_str(), 0.0)).sigma_S;
        for (double a : {-1.0, 1.0}) EXPECT_EQ(classify(germ(text.c_str(), a)).sigma_S, s0) << text << " a=" << a;
    }
}

TEST(Classify, NonSwallowtailHasNonGenericSingularImage) {
    const MapGerm g = germ(kPlanarFrontal);
    const SingularityReport r = classify(g);
    const CuspClass c = classify_cusp(factor_cusp(singular_image(g)));
    EXPECT_FALSE(r.is_swallowtail);
    EXPECT_EQ(c.kind, CuspKind::NonGenericCusp);
}

TEST(AlongAxis, Sigma0C) {
    EXPECT_EQ(sigma0_C(oriented_normal(germ("(u, v^2, v^3)", 0.0, {0.3, 0.0})), 0.3), Sign::Positive);
    EXPECT_EQ(sigma0_C(oriented_normal(germ("(u, v^2, v^4)", 0.0, {0.3, 0.0})), 0.3), Sign::Zero);
    const NormalField plus = oriented_normal(germ(kPlus));
    for (double u : {-0.1, -0.01, 0.01, 0.1}) EXPECT_EQ(sigma0_C(plus, u), Sign::Positive) << u;
    const NormalField e = oriented_normal(germ(kPlanarSwallowtail));
    for (double u : {-0.01, 0.01}) EXPECT_EQ(sigma0_C(e, u), Sign::Negative) << u;
    EXPECT_THROW(sigma0_C(e, 0.0), DomainError);
}

TEST(AlongAxis, SigmaGC) {
    const NormalField plus = oriented_normal(germ(kPlus));
    for (double u : {-0.1, -0.01, 0.01, 0.1}) EXPECT_EQ(sigma_g_C(plus, u), Sign::Zero) << u;
    const NormalField e = oriented_normal(germ(kPlanarSwallowtail));
    for (double u : {-0.01, 0.01}) EXPECT_EQ(sigma_g_C(e, u), Sign::Positive) << u;
    const NormalField d = oriented_normal(germ(kDevelopable));
    for (double u : {-0.2, 0.05, 0.3}) EXPECT_EQ(sigma_g_C(d, u), Sign::Zero) << u;
}

TEST(AlongAxis, KappaNuAsymptotic) {
    const NormalField plus = oriented_normal(germ(kPlus));
    for (int i = 0; i <= 10; ++i) {
        const double u = -0.25 + 0.05 * i;
        EXPECT_LT(std::abs(kappa_nu_on_axis(plus, u)), 1e-9) << u;
    }
}

TEST(AlongAxis, Sigma0CInvariantUnderCoordinateChanges) {
    // (u, v) -> (phi(s, w), w psi(s, w)), phi_s > 0, psi > 0
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> C(-0.5, 0.5);
    for (const char* text : {kPlanarSwallowtail, kPlus, kMinus}) {
        const Vec3Expr f = parse_vec(text);
        const NormalField base = oriented_normal(germ(text));
        for (int n = 0; n < 20; ++n) {
            const Expr s = Expr::u(), w = Expr::v();
            const Expr phi = Expr(1.0 + 0.5 * std::abs(C(rng))) * s + Expr(C(rng)) * s * s + Expr(C(rng)) * w;
            const Expr psi = Expr(1.0 + 0.5 * std::abs(C(rng))) + Expr(C(rng)) * s + Expr(C(rng)) * w;
            const MapGerm moved{SymField(substitute(f, phi, w * psi)), SpaceForm{0.0}, {0.0, 0.0}, "moved"};
            const NormalField nf = oriented_normal(moved);
            for (double s0 : {-0.05, 0.04}) {
                const double u0 = eval(phi, s0, 0.0);
                EXPECT_EQ(sigma0_C(nf, s0), sigma0_C(base, u0)) << text << " n=" << n;
            }
        }
    }
}

TEST(LimitNormal, AgreesWithOneSidedLimits) {
    for (const char* text : {kPlanarSwallowtail, kStandardAdmissible, kPlus}) {
        const MapGerm g = germ(text);
        const Vec3d d = limit_normal_at_second_kind(g);
        const NormalField nf = make_normal(g);
        // nu-tilde(u, 0) turns at a first-order rate in u
        for (double u : {-1e-4, 1e-4}) {
            const Vec3d side = values(nf.unoriented(u, 0.0, 4));
            EXPECT_LT(angle_between(d, side), 1e-3) << text << " u=" << u;
        }
    }
    const Vec3d d = limit_normal_at_second_kind(germ(kPlanarSwallowtail));
    EXPECT_NEAR(norm(normalized(d) - Vec3d{0, 0, -1}), 0.0, 1e-14);
}

TEST(LimitNormal, RegularPointRejected) {
    EXPECT_THROW(limit_normal_at_second_kind(germ("(u, v, 0)")), DomainError);
}

TEST(EpsilonIdentity, BuiltGerms) {
    for (const char* text : {kPlanarSwallowtail, kPlus, kMinus}) {
        for (double u : {-0.1, -0.01, 0.01, 0.1}) {
            const EpsilonCheck c = epsilon_identity_check(germ(text), u);
            EXPECT_NEAR(c.epsilon, -u, 1e-12) << text;
            EXPECT_LT(c.residual, 1e-7) << text;
        }
    }
    EXPECT_LT(epsilon_identity_check(germ(kPlanarFrontal), 0.2).residual, 1e-7);
    for (double a : {-1.0, 1.0}) EXPECT_LT(epsilon_identity_check(germ(kPlanarSwallowtail, a), 0.1).residual, 1e-7);
}

TEST(EpsilonIdentity, RegularPointRejected) {
    EXPECT_THROW(epsilon_identity_check(germ("(u, v, 0)"), 0.1), DomainError);
}

TEST(LimitingTangentPlane, PlanarCusp) {
    EXPECT_TRUE(project_to_limiting_tangent_plane(germ(kPlanarSwallowtail)).is_planar_cusp);
    EXPECT_TRUE(project_to_limiting_tangent_plane(germ(kPlanarFrontal)).is_planar_cusp);
    EXPECT_THROW(project_to_limiting_tangent_plane(germ("(u, v, 0)")), DomainError);
}

TEST(Curvature, UnitSphere) {
    const MapGerm g = germ("(sin(u)*cos(v), sin(u)*sin(v), cos(u))");
    for (double u : {0.5, 1.0}) EXPECT_NEAR(gaussian_curvature(g, u, 0.3).K_E, 1.0, 1e-8);
}

TEST(Curvature, GaussEquationAndBrioschi) {
    for (double a : {-1.0, 0.0, 1.0}) {
        const MapGerm g = germ(kPlanarSwallowtail, a);
        for (double u : {-0.2, 0.1})
            for (double v : {-0.1, 0.08}) {
                const CurvatureReport r = gaussian_curvature(g, u, v);
                EXPECT_DOUBLE_EQ(r.K_a - r.K_ext, a);
                EXPECT_NEAR(r.K_brioschi, r.K_a, 1e-6 * (1.0 + std::abs(r.K_a)));
            }
    }
}

TEST(Curvature, FlatModelScale) {
    // g_0 = 4 g_E, so the flat extrinsic curvature is a quarter of the classical one
    const MapGerm g = germ(kPlanarSwallowtail);
    const CurvatureReport r = gaussian_curvature(g, 0.1, 0.05);
    EXPECT_NEAR(r.K_ext, r.K_E / 4.0, 1e-10 * std::abs(r.K_E));
}

TEST(Curvature, ParabolicTypeNonPositive) {
    const MapGerm g = germ(kParabolic);
    for (double u : {-0.2, 0.0, 0.15})
        for (double v : {-0.05, 0.02, 0.1}) EXPECT_LE(gaussian_curvature(g, u, v).K_E, 1e-6) << u << " " << v;
}

TEST(Curvature, SingularPointRejected) {
    EXPECT_THROW(gaussian_curvature(germ(kPlanarSwallowtail), 0.1, 0.0), DomainError);
}

TEST(TailPart, PlanarSwallowtailNegativeCurvature) {
    const MapGerm g = germ(kPlanarSwallowtail);
    const TailPart t = tail_part(g);
    EXPECT_EQ(t.self_intersection_side, -1);
    int probes = 0;
    for (double u : {-0.1, -0.05, 0.0, 0.05, 0.1})
        for (double v : {0.01, 0.02, 0.03, 0.05}) {
            EXPECT_LT(gaussian_curvature(g, u, t.tail_side * v).K_E, 0.0);
            ++probes;
        }
    EXPECT_EQ(probes, 20);
}
