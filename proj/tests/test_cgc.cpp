#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <memory>

#include "swallowkit/cgc.hpp"

namespace sk = swallowkit;

namespace {

std::shared_ptr<const sk::RadialProfile> profile() {
    static auto p = std::make_shared<const sk::RadialProfile>();
    return p;
}

}  // namespace

TEST(RadialProfile, InitialData) {
    const auto& F = *profile();
    EXPECT_EQ(F.F(1.0), 0.0);
    EXPECT_EQ(F.dF(1.0), 1.0);
    EXPECT_DOUBLE_EQ(F.d2F(1.0), -1.0);
    EXPECT_TRUE(F.warnings().empty());
}

TEST(RadialProfile, TaylorAtOne) {
    const auto& F = *profile();
    for (double h : {1e-2, 5e-3, 2e-3, -2e-3, -1e-2}) {
        EXPECT_NEAR(F.F(1.0 + h), h - h * h / 2, 2.0 * std::abs(h * h * h)) << h;
    }
    // F''' (1) from differentiating the equation: -F''/r + F'/r^2 - cosh(2F) F' = 1 + 1 - 1 = 1.
    const sk::Jet2 s = F.series(1.0, 4);
    EXPECT_NEAR(s.partial(3, 0), 1.0, 1e-12);
}

TEST(RadialProfile, ResidualAndRichardson) {
    const auto& F = *profile();
    double worst = 0.0;
    for (double r = F.lo(); r <= F.hi(); r += 0.00731) worst = std::max(worst, std::abs(F.residual(r)));
    EXPECT_LT(worst, 1e-8);
    const sk::RadialProfile half(sk::RadialOptions{0.5, 1.6, 5e-5});
    EXPECT_LT(F.sup_difference(half), 1e-9);
}

TEST(RadialProfile, FourthOrderConvergence) {
    EXPECT_GE(sk::observed_order(0.5, 1.6, 0.02), 3.8);
}

TEST(RadialProfile, SeriesMatchesDenseOutput) {
    const auto& F = *profile();
    const sk::Jet2 s = F.series(1.2, 6);
    for (double h : {-0.01, 0.004, 0.02}) {
        double sum = 0.0;
        for (int i = 6; i >= 0; --i) sum = sum * h + s(i, 0);
        EXPECT_NEAR(sum, F.F(1.2 + h), 1e-11);
    }
}

TEST(RadialProfile, Preconditions) {
    EXPECT_THROW(sk::RadialProfile(sk::RadialOptions{0.0, 1.5, 1e-3}), sk::PreconditionError);
    EXPECT_THROW(sk::RadialProfile(sk::RadialOptions{1.2, 1.5, 1e-3}), sk::PreconditionError);
    EXPECT_THROW((void)profile()->F(0.2), sk::DomainError);
}

TEST(RadialProfile, BlowUpTruncatesDomain) {
    const sk::RadialProfile p(sk::RadialOptions{1e-6, 1.0, 1e-4, 3.0});
    EXPECT_FALSE(p.warnings().empty());
    EXPECT_GT(p.lo(), 1e-6);
}

TEST(OmegaField, SinhGordonResidual) {
    const sk::OmegaField w(profile());
    const sk::GridSpec g;
    double worst = 0.0;
    for (int j = 0; j < g.nv; j += 5)
        for (int i = 0; i < g.nu; i += 5) worst = std::max(worst, std::abs(w.pde_residual(g.u(i), g.v(j))));
    EXPECT_LT(worst, 1e-7);
}

TEST(OmegaField, ChainRuleAgainstDifferences) {
    const sk::OmegaField w(profile());
    const double u = 0.3, v = 0.9, h = 1e-4;
    const sk::Jet2 j = w(u, v, 2);
    const auto val = [&](double a, double b) { return w.value(a, b).w; };
    EXPECT_NEAR(j.partial(1, 0), (val(u + h, v) - val(u - h, v)) / (2 * h), 1e-7);
    EXPECT_NEAR(j.partial(0, 1), (val(u, v + h) - val(u, v - h)) / (2 * h), 1e-7);
    EXPECT_NEAR(j.partial(1, 1),
                (val(u + h, v + h) - val(u + h, v - h) - val(u - h, v + h) + val(u - h, v - h)) / (4 * h * h), 1e-5);
    EXPECT_NEAR(w.value(u, v).wu, j.partial(1, 0), 1e-12);
}

TEST(FundamentalForms, PrintedConditionsAtBasePoint) {
    const sk::FundamentalForms forms(profile(), sk::CurvatureModel::Printed);
    const auto c = sk::check_swallowtail_conditions(forms);
    EXPECT_EQ(c.lambda1, 1.0);
    EXPECT_EQ(c.lambda2, 0.0);
    EXPECT_NEAR(c.lambda1_u, 0.0, 1e-6);
    EXPECT_NEAR(c.lambda1_uu, -1.0, 1e-6);
    EXPECT_NEAR(c.lambda1_v, -2.0, 1e-6);
}

TEST(FundamentalForms, IntegrableConditionsAtBasePoint) {
    // k1 = (1 + e^{-2w})/2, so d k1 = -e^{-2w} d w and d^2 k1 = -w_uu at (0,1).
    const sk::FundamentalForms forms(profile(), sk::CurvatureModel::Integrable);
    const auto c = sk::check_swallowtail_conditions(forms);
    EXPECT_NEAR(c.lambda1, 1.0, 1e-15);
    EXPECT_NEAR(c.lambda2, 0.0, 1e-15);
    EXPECT_NEAR(c.lambda1_u, 0.0, 1e-12);
    EXPECT_NEAR(c.lambda1_uu, -1.0, 1e-9);
    EXPECT_NEAR(c.lambda1_v, -1.0, 1e-9);
}

TEST(FundamentalForms, IntegrableModelSatisfiesGaussAndCodazzi) {
    const sk::FundamentalForms forms(profile());
    EXPECT_LT(sk::integrability_residual(forms, {}, 41), 1e-5);
    for (double u : {-0.4, 0.0, 0.35})
        for (double v : {0.7, 1.0, 1.3}) {
            const auto f = forms.at(u, v);
            const double H = (f.L * f.G + f.N * f.E) / (2 * f.E * f.G);
            EXPECT_NEAR(H, 0.5, 1e-12);
        }
}

TEST(FundamentalForms, PrintedModelFailsTheGuard) {
    const sk::FundamentalForms forms(profile(), sk::CurvatureModel::Printed);
    EXPECT_GT(forms.gauss_residual(0.3, 1.2), 1e-3);
    EXPECT_GT(forms.codazzi_residual(0.3, 1.2), 1e-3);
    EXPECT_THROW(sk::reconstruct_surface(forms), sk::PreconditionError);
}

class Reconstruction : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        forms_ = std::make_unique<sk::FundamentalForms>(profile());
        const auto t0 = std::chrono::steady_clock::now();
        surface_ = std::make_unique<sk::SurfaceGrid>(sk::reconstruct_surface(*forms_));
        seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    static void TearDownTestSuite() {
        surface_.reset();
        forms_.reset();
    }
    static inline std::unique_ptr<sk::FundamentalForms> forms_;
    static inline std::unique_ptr<sk::SurfaceGrid> surface_;
    static inline double seconds_ = 0.0;
};

TEST_F(Reconstruction, RoundTrip) {
    const sk::RoundTrip r = sk::round_trip(*surface_, *forms_);
    EXPECT_LT(r.first_form, 1e-4);
    EXPECT_LT(r.second_form, 1e-4);
    EXPECT_LT(r.orthogonality, 1e-6);
    EXPECT_LT(r.mean_curvature, 1e-4);
    EXPECT_LT(r.frame, 1e-8);
    EXPECT_LT(seconds_, 60.0);
}

TEST_F(Reconstruction, BaseFrame) {
    const sk::GridSpec& g = surface_->grid;
    const std::size_t k = surface_->index(100, 100);
    EXPECT_DOUBLE_EQ(g.u(100), 0.0);
    EXPECT_NEAR(g.v(100), 1.0, 1e-15);
    EXPECT_EQ(norm(surface_->f[k]), 0.0);
    EXPECT_EQ(surface_->normal[k].z, 1.0);
}

TEST_F(Reconstruction, JetsAgreeWithGrid) {
    const sk::SurfaceJets sj = sk::surface_jets(*forms_, {0.0, 1.0}, 8);
    const sk::GridSpec& g = surface_->grid;
    for (auto [i, j] : {std::pair{104, 100}, std::pair{100, 105}, std::pair{96, 103}}) {
        const double du = g.u(i), dv = g.v(j) - 1.0;
        sk::Vec3d p{0, 0, 0};
        for (int n = 0; n <= 8; ++n)
            for (int b = 0; b <= n; ++b)
                p += sk::coefficient(sj.f, n - b, b) * (std::pow(du, n - b) * std::pow(dv, b));
        EXPECT_LT(norm(p - surface_->at(i, j)), 1e-9);
    }
}

TEST_F(Reconstruction, ParallelSurfaceHasUnitCurvature) {
    const sk::SurfaceGrid h = sk::parallel_surface(*surface_);
    const sk::ParallelReport rep = sk::check_parallel_surface(h, *forms_);
    EXPECT_EQ(rep.samples, 50);
    EXPECT_LT(rep.max_curvature_error, 1e-3);
    EXPECT_GT(rep.singular_nodes, 0);
    EXPECT_EQ(rep.other_singular_nodes, 0);
    EXPECT_LT(rep.max_singular_offset, 0.01);
}

TEST(ParallelSurfaceGerm, SwallowtailAtBasePoint) {
    const sk::FundamentalForms forms(profile());
    const sk::MapGerm g = sk::parallel_surface_germ(forms);
    const sk::SingularityReport rep = sk::classify(g);
    EXPECT_TRUE(rep.is_singular);
    EXPECT_EQ(rep.kind, sk::PointKind::SecondKind);
    EXPECT_TRUE(rep.is_wavefront);
    EXPECT_TRUE(rep.is_swallowtail);
}

TEST(ParallelSurfaceGerm, RegularAwayFromTheCircle) {
    const sk::FundamentalForms forms(profile());
    sk::MapGerm g = sk::parallel_surface_germ(forms);
    g.base = {0.0, 0.05};
    EXPECT_FALSE(sk::classify(g).is_singular);
}
