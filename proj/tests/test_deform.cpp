#include <gtest/gtest.h>

#include <chrono>

#include "swallowkit/deform.hpp"

using namespace swallowkit;

namespace {

const SwallowtailData kPlanarSwallowtail{parse_vec("(2, 3*u, 0)"), parse_vec("(0, 0, 1)")};
const SwallowtailData kPlanarFrontal{parse_vec("(2, 3*u, 0)"), parse_vec("(0, 0, 2*u)")};
const AsymptoticData kPlus{parse_vec("(1, u, u^2)"), SymScalar(0.0), parse_vec("(u^2, -2*u, 1)")};
const AsymptoticData kMinus{parse_vec("(1, u, u^2)"), SymScalar(0.0), parse_vec("(-u^2, 2*u, -1)")};
const AsymptoticData kParabolic{parse_vec("(1, u, u^2)"), SymScalar(0.1), parse_vec("(0, 0, 0)")};
const AsymptoticData kDevelopable{parse_vec("(1, u, u^2)"), SymScalar(0.0), parse_vec("(0, 0, 0)")};

/// s R e for the rotation by `angle` about (1, 1, 1).
Vec3Expr rotated(const Vec3Expr& e, double angle, double s) {
    const Eigen::Matrix3d R = Eigen::AngleAxisd(angle, Eigen::Vector3d(1, 1, 1).normalized()).toRotationMatrix();
    Vec3Expr r;
    for (int i = 0; i < 3; ++i)
        r[i] = Expr(s * R(i, 0)) * e.x + Expr(s * R(i, 1)) * e.y + Expr(s * R(i, 2)) * e.z;
    return r;
}

SwallowtailData rotated(const SwallowtailData& d, double angle, double s) {
    return {SymField(rotated(*d.xi.expr, angle, s)), SymField(rotated(*d.b.expr, angle, s))};
}

std::string failures(const Certificate& c) {
    std::string s;
    for (std::size_t i = 0; i < std::min<std::size_t>(c.failures.size(), 5); ++i) s += c.failures[i] + "\n";
    return s;
}

/// Germ of the family at its start, compared with the first input through the entry link.
double entry_residual(const DeformationFamily& f, const MapGerm& input) {
    return link_residual(input, f.stage_germ(0, 0.0), f.entry);
}

double exit_residual(const DeformationFamily& f, const MapGerm& input) {
    return link_residual(input, f.stage_germ(f.stages.size() - 1, 1.0), f.exit);
}

}  // namespace

TEST(GenericSwallowtails, PlanarSwallowtailToRotatedVariant) {
    const SwallowtailData d2 = rotated(kPlanarSwallowtail, 0.7, 1.5);
    EXPECT_EQ(sign_pair_of(d2), sign_pair_of(kPlanarSwallowtail));
    const auto t0 = std::chrono::steady_clock::now();
    const DeformationFamily f = deform_generic_swallowtails(kPlanarSwallowtail, d2);
    const Certificate c = certify(f);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(c.pass) << failures(c);
    EXPECT_EQ(c.samples.size(), 63u);
    EXPECT_LT(secs, 60.0);
    for (const auto& s : c.samples) {
        EXPECT_EQ(s.report.sigma0_S, Sign::Positive);  // after u -> -u
        EXPECT_EQ(s.report.sigma_S, Sign::Negative);
    }
    EXPECT_LT(entry_residual(f, build(kPlanarSwallowtail)), 1e-12);
    EXPECT_LT(exit_residual(f, build(d2)), 1e-12);
}

TEST(GenericSwallowtails, EqualEndpointsGiveConstantFamily) {
    const SwallowtailData d{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, 1/2)")};
    const DeformationFamily f = deform_generic_swallowtails(d, d);
    const Certificate c = certify(f);
    EXPECT_TRUE(c.pass) << failures(c);
    const MapGerm g0 = f.germ(0.0);
    for (double t : {0.3, 0.5, 0.8, 1.0}) EXPECT_LT(link_residual(g0, f.germ(t), std::nullopt), 1e-8) << t;
}

TEST(GenericSwallowtails, SignMismatchIsRejected) {
    const SwallowtailData plus{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, 1/2)")};
    const SwallowtailData minus{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, -1)")};
    try {
        deform_generic_swallowtails(plus, minus);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("sign mismatch"), std::string::npos);
    }
    EXPECT_THROW(deform_generic_swallowtails(plus, SwallowtailData{plus.xi, parse_vec("(0, 0, 0)")}), PreconditionError);
}

TEST(GenericSwallowtails, InterpolatedCuspDeterminantIsLinear) {
    // det(xi, xi', xi'')(0) = 2 and 12 before normalization; both positive.
    const SwallowtailData d1{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, 1/4)")};
    const SwallowtailData d2{parse_vec("(1, 2*u, 3*u^2 + u)"), parse_vec("(u, 0, 1)")};
    const DeformationFamily f = deform_generic_swallowtails(d1, d2);
    ASSERT_EQ(f.stages.size(), 3u);
    for (double t : linspace(0.0, 1.0, 21)) {
        const auto check = f.stages[1].check(t);
        EXPECT_FALSE(check) << *check;
        const auto d = std::get<SwallowtailData>(f.stages[1].member(t));
        const auto j = detail::axis_jets(d.xi, 0.0, 0);
        EXPECT_GT(det(values(j.xi), values(j.d1), values(j.d2)), 0.0);
    }
}

TEST(FlipSigmaS, ScalesThroughNonGenericMidpoint) {
    // D = 2, Delta1 = -1/2, Delta0 = 3: Delta0 along b -> s b is 2 - s, s in [-1, 1].
    const SwallowtailData d{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, -1/2)")};
    EXPECT_EQ(sign_pair_of(d), std::pair(Sign::Positive, Sign::Negative));
    const DeformationFamily f = flip_sigma_S(d);
    const Certificate c = certify(f);
    EXPECT_TRUE(c.pass) << failures(c);
    const auto mid = std::get<SwallowtailData>(f(0.5));
    const Discriminants q = discriminants(mid);
    EXPECT_NEAR(q.delta0, 2.0, 1e-12);
    EXPECT_NEAR(q.delta1, 0.0, 1e-12);
    EXPECT_TRUE(classify(build(mid)).is_swallowtail);
    EXPECT_EQ(sign_pair_of(std::get<SwallowtailData>(f(1.0))), std::pair(Sign::Positive, Sign::Positive));
    for (double t : linspace(0.0, 1.0, 21)) EXPECT_NEAR(discriminants(f(t)).delta0, 2.0 + (1.0 - 2.0 * t), 1e-12);
}

TEST(FlipSigmaS, Preconditions) {
    EXPECT_THROW(flip_sigma_S(SwallowtailData{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, 1/4)")}), PreconditionError);
    // Non-generic cusp: Delta0 = -2 Delta1, scaling b crosses Delta0 = 0.
    const auto ex = reflect_u(kPlanarSwallowtail).data;
    EXPECT_EQ(sign_pair_of(ex), std::pair(Sign::Positive, Sign::Negative));
    EXPECT_THROW(flip_sigma_S(ex), PreconditionError);
}

TEST(MakeGeneric, QuarterSecondDerivativeTarget) {
    const SwallowtailData seed{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, 0)")};
    const DeformationFamily f = make_generic(seed);
    const Certificate c = certify(f);
    EXPECT_TRUE(c.pass) << failures(c);
    for (double t : linspace(0.0, 1.0, 11)) {
        const Discriminants q = discriminants(f(t));
        EXPECT_NEAR(q.delta0, 2.0 * (1.0 - t / 2.0), 1e-12);
        EXPECT_NEAR(q.delta1, t / 2.0, 1e-12);
    }
    EXPECT_EQ(c.samples.back().report.sigma_S, Sign::Positive);
    EXPECT_EQ(c.samples.back().report.sigma0_S, Sign::Positive);
}

TEST(MakeGeneric, FullSecondDerivativeTargetLosesTheSwallowtail) {
    // b -> xi'': Delta0 = D (1 - 2t) vanishes at t = 1/2.
    const SwallowtailData seed{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, 0)")};
    const Certificate c = certify(make_generic(seed, {}, 1.0));
    EXPECT_FALSE(c.pass);
    EXPECT_FALSE(c.samples[10].report.is_swallowtail);
    EXPECT_EQ(c.samples.back().report.sigma0_S, Sign::Negative);
}

TEST(MakeGeneric, Preconditions) {
    EXPECT_THROW(make_generic(SwallowtailData{parse_vec("(1, u, u^2)"), parse_vec("(0, 0, 1/4)")}), PreconditionError);
    // Non-generic cusp with b(o) in the span: Delta0 = 0, not a swallowtail.
    EXPECT_THROW(make_generic(SwallowtailData{parse_vec("(2, 3*u, 0)"), parse_vec("(0, 0, u)")}), PreconditionError);
}

TEST(RaiseCuspDeterminant, LinearInTheParameter) {
    const auto ex = reflect_u(kPlanarSwallowtail).data;
    const DeformationFamily f = raise_cusp_determinant(ex, 24.0);
    for (double t : linspace(0.0, 1.0, 11)) {
        const Discriminants q = discriminants(f(t));
        EXPECT_NEAR(q.cusp_determinant, 24.0 * t, 1e-12);
        EXPECT_NEAR(q.delta1, -6.0, 1e-12);
    }
    EXPECT_TRUE(certify(f).pass);
}

TEST(AnySwallowtails, PlanarSwallowtailToAsymptoticPlus) {
    const SwallowtailData plus = as_swallowtail_data(kPlus);
    const auto t0 = std::chrono::steady_clock::now();
    const DeformationFamily f = deform_swallowtails(kPlanarSwallowtail, plus);
    const Certificate c = certify(f);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(c.pass) << failures(c);
    EXPECT_LT(secs, 120.0);
    EXPECT_LT(entry_residual(f, build(kPlanarSwallowtail)), 1e-12);
    EXPECT_LT(exit_residual(f, build(plus)), 1e-12);
    EXPECT_EQ(c.samples.front().report.sigma_S, Sign::Negative);  // the planar swallowtail after u -> -u
    EXPECT_EQ(c.samples.back().report.sigma_S, Sign::Zero);
}

TEST(AnySwallowtails, SwappedEndpoints) {
    const SwallowtailData plus = as_swallowtail_data(kPlus);
    const DeformationFamily f = deform_swallowtails(plus, kPlanarSwallowtail);
    const Certificate c = certify(f);
    EXPECT_TRUE(c.pass) << failures(c);
    EXPECT_LT(entry_residual(f, build(plus)), 1e-12);
    EXPECT_LT(exit_residual(f, build(kPlanarSwallowtail)), 1e-12);
}

TEST(AnySwallowtails, RejectsNonSwallowtailEndpoint) {
    try {
        deform_swallowtails(kPlanarSwallowtail, kPlanarFrontal);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("not a swallowtail"), std::string::npos);
    }
}

TEST(AsymptoticNormalForm, PositiveBranch) {
    const AsymptoticData d{parse_vec("(1, u, u^2)"), SymScalar(0.0), parse_vec("(2*u^2, -4*u, 2)")};
    const DeformationFamily f = deform_to_asymptotic_normal_form(d);
    const Certificate c = certify(f);
    EXPECT_TRUE(c.pass) << failures(c);
    for (const auto& s : c.samples) {
        ASSERT_TRUE(s.delta_qr);
        EXPECT_NEAR(*s.delta_qr, 3.0 * (2.0 - s.t), 1e-12);  // 3 det(xi, xi', r_t)
        for (Sign k : s.curvature) EXPECT_EQ(k, Sign::Positive);
    }
    const auto end = std::get<AsymptoticData>(f(1.0));
    EXPECT_NEAR(norm(value(end.r.f, 0.3, 0.1) - Vec3d{0.09, -0.6, 1.0}), 0.0, 1e-12);
}

TEST(AsymptoticNormalForm, NegativeBranch) {
    // Delta = 3 (-0.01) - 2 (0.09)(2) = -0.39 < 0.
    const AsymptoticData d{parse_vec("(1, u, u^2)"), SymScalar(0.3), parse_vec("(-0.01*u^2, 0.02*u, -0.01)")};
    EXPECT_NEAR(delta_qr(d, 0.0), -0.39, 1e-12);
    const DeformationFamily f = deform_to_asymptotic_normal_form(d);
    ASSERT_FALSE(f.notes.empty());
    EXPECT_NE(f.notes.front().find("< 0"), std::string::npos);
    const Certificate c = certify(f);
    EXPECT_TRUE(c.pass) << failures(c);
    for (const auto& s : c.samples) {
        // (1 - t) Delta - 3 t |xi x xi'|^2
        EXPECT_NEAR(*s.delta_qr, (1.0 - s.t) * -0.39 - 3.0 * s.t, 1e-12);
        for (Sign k : s.curvature) EXPECT_EQ(k, Sign::Negative);
    }
}

TEST(AsymptoticNormalForm, Preconditions) {
    // 3 det(xi, xi', r) = 2 q^2 D: Delta_{q,r}(o) = 0.
    const AsymptoticData flat{parse_vec("(1, u, u^2)"), SymScalar(0.3), parse_vec("(0, 0, 0.12)")};
    EXPECT_NEAR(delta_qr(flat, 0.0), 0.0, 1e-12);
    EXPECT_THROW(deform_to_asymptotic_normal_form(flat), PreconditionError);
    EXPECT_THROW(deform_to_asymptotic_normal_form(reflect_u(kPlus).data), PreconditionError);
}

TEST(AsymptoticSwallowtails, PositiveCurvatureIsKept) {
    // A positively curved variant: another cusp, nonzero q.
    const AsymptoticData d2{parse_vec("(1, 2*u, u + 3*u^2)"), SymScalar(0.2), parse_vec("(0, -u, 3)")};
    ASSERT_EQ(curvature_sign_of(d2), Sign::Positive);
    const auto t0 = std::chrono::steady_clock::now();
    const DeformationFamily f = deform_asymptotic_swallowtails(kPlus, d2, true);
    const Certificate c = certify(f);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(c.pass) << failures(c);
    EXPECT_LT(secs, 60.0);
    EXPECT_TRUE(f.track_curvature);
    for (const auto& s : c.samples)
        for (Sign k : s.curvature) EXPECT_EQ(k, Sign::Positive);
    EXPECT_LT(entry_residual(f, build_asymptotic(kPlus)), 1e-12);
    EXPECT_LT(exit_residual(f, build_asymptotic(d2)), 1e-12);
}

TEST(AsymptoticSwallowtails, ParabolicToDevelopable) {
    const DeformationFamily f = deform_asymptotic_swallowtails(kParabolic, kDevelopable, false);
    const Certificate c = certify(f);
    EXPECT_TRUE(c.pass) << failures(c);
    EXPECT_FALSE(f.track_curvature);
    EXPECT_LT(exit_residual(f, build_asymptotic(kDevelopable)), 1e-12);
}

TEST(AsymptoticSwallowtails, Preconditions) {
    try {
        deform_asymptotic_swallowtails(kPlus, kMinus, true);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("mixed curvature signs"), std::string::npos);
    }
    EXPECT_THROW(deform_asymptotic_swallowtails(kPlus, reflect_u(kPlus).data, false), PreconditionError);
    EXPECT_THROW(deform_asymptotic_swallowtails(kPlus, kParabolic, true), PreconditionError);
}

TEST(CoordinateHomotopy, Identity) {
    const CoordinateHomotopy h = coordinate_homotopy({Expr::u(), Expr::v()});
    EXPECT_EQ(h.alpha, 1.0);
    EXPECT_EQ(h.beta, 1.0);
    const AdmissibilityCheck r = certify(h);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.min_jacobian, 1.0, 1e-15);
    for (double t : {0.0, 0.4, 1.0}) {
        auto [U, V] = h.map_at(t)(0.03, -0.02, 2);
        EXPECT_NEAR(U.value(), 0.03, 1e-15);
        EXPECT_NEAR(V.value(), -0.02, 1e-15);
    }
}

TEST(CoordinateHomotopy, QuadraticChange) {
    const CoordinateChange c{parse("u + u^2"), parse("v + u*v")};
    const CoordinateHomotopy h = coordinate_homotopy(c);
    EXPECT_EQ(h.alpha, 1.0);
    EXPECT_EQ(h.beta, 1.0);
    const AdmissibilityCheck r = certify(h);
    EXPECT_TRUE(r.pass);
    // Jacobian (1 + 2u)(1 + u) - 0 >= 0.8 * 0.9 on the grid.
    EXPECT_NEAR(r.min_jacobian, 0.72, 1e-12);
    auto [U, V] = h.map_at(0.5)(0.1, 0.1, 0);
    EXPECT_NEAR(U.value(), 0.1 + 0.5 * 0.01, 1e-15);
    EXPECT_NEAR(V.value(), 0.1 + 0.5 * 0.01, 1e-15);
}

TEST(CoordinateHomotopy, Rejections) {
    EXPECT_THROW(coordinate_homotopy({parse("-u"), Expr::v()}), PreconditionError);
    EXPECT_THROW(coordinate_homotopy({Expr::u(), parse("v + u^2")}), PreconditionError);
    EXPECT_THROW(coordinate_homotopy({Expr::u(), parse("-v")}), PreconditionError);
}

TEST(Links, ReflectionAndUnitSpeed) {
    const auto r = reflect_u(kPlanarSwallowtail);
    EXPECT_LT(link_residual(build(kPlanarSwallowtail), build(r.data), r.link, 0.05, 11), 1e-15);
    const auto n = normalize_unit_speed(kPlanarSwallowtail);
    EXPECT_LT(link_residual(build(kPlanarSwallowtail), build(n.data), n.link, 0.05, 11), 1e-12);
    EXPECT_LT(link_residual(build(n.data), build(kPlanarSwallowtail), inverted(n.link), 0.05, 11), 1e-12);
    for (double u : {-0.2, 0.0, 0.1}) EXPECT_NEAR(norm(value(n.data.xi.f, u, 0.0)), 1.0, 1e-12);
    const Link both = composed(r.link, n.link);
    EXPECT_TRUE(both.reverses_orientation);
    const auto rn = normalize_unit_speed(r.data);
    EXPECT_LT(link_residual(build(kPlanarSwallowtail), build(rn.data), composed(r.link, rn.link), 0.05, 11), 1e-12);
}

TEST(Links, AsymptoticReflectionAndNormalization) {
    const auto r = reflect_u(kParabolic);
    EXPECT_LT(link_residual(build_asymptotic(kParabolic), build_asymptotic(r.data), r.link), 1e-15);
    EXPECT_THROW(normalize_unit_speed(kParabolic), PreconditionError);
    const auto n = normalize_unit_speed(kPlus);
    EXPECT_LT(link_residual(build_asymptotic(kPlus), build_asymptotic(n.data), n.link), 1e-12);
    EXPECT_EQ(curvature_sign_of(n.data), Sign::Positive);
}

TEST(FrameDecomposition, NormalComponentAndCondition) {
    const SwallowtailData d{parse_vec("(1, u, u^2)"), parse_vec("(1 + u, v, 3)")};
    const ScalarField x3 = normal_component(d);
    // det(xi, xi', b) / |xi x xi'|^2 at (0.2, 0.1): b = (1.2, 0.1, 3).
    const Vec3d xi{1, 0.2, 0.04}, d1{0, 1, 0.4}, b{1.2, 0.1, 3};
    const Vec3d c = cross(xi, d1);
    EXPECT_NEAR(value(x3, 0.2, 0.1), det(xi, d1, b) / dot(c, c), 1e-13);
    EXPECT_LT(frame_condition(d.xi, 0.25), 10.0);
    EXPECT_GT(frame_condition(SymField(parse_vec("(1, 1e-9*u, 0)")), 0.25), 1e8);
}
