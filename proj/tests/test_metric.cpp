#include <gtest/gtest.h>

#include <random>

#include "swallowkit/expr.hpp"
#include "swallowkit/field.hpp"
#include "swallowkit/metric.hpp"

using namespace swallowkit;

namespace {

Vec3j germ_jet(const char* text, double u, double v, int K) { return jet_eval(parse_vec(text), u, v, K); }

// Christoffel symbols by central differences of g_ij = rho^2 delta_ij.
Vec3d numeric_christoffel(const SpaceForm& sf, const Vec3d& p, const Vec3d& X, const Vec3d& Y) {
    const double h = 1e-5;
    auto g = [&](const Vec3d& q) { const double r = conformal_factor(sf, q); return r * r; };
    Vec3d dg;
    for (int k = 0; k < 3; ++k) {
        Vec3d e{0, 0, 0};
        e[k] = h;
        dg[k] = (g(p + e) - g(p - e)) / (2 * h);
    }
    const double g0 = g(p);
    // Gamma^k_ij = (1/2) g^{kk} (d_i g_jk + d_j g_ik - d_k g_ij) for a conformally flat metric
    Vec3d r{0, 0, 0};
    for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double t = (j == k ? dg[i] : 0.0) + (i == k ? dg[j] : 0.0) - (i == j ? dg[k] : 0.0);
                s += 0.5 * t / g0 * X[i] * Y[j];
            }
        r[k] = s;
    }
    return r;
}

}  // namespace

TEST(ConformalFactor, Examples) {
    EXPECT_DOUBLE_EQ(conformal_factor(SpaceForm{0.0}, Vec3d{3, -1, 7}), 2.0);
    EXPECT_DOUBLE_EQ(conformal_factor(SpaceForm{1.0}, Vec3d{1, 0, 0}), 1.0);
    EXPECT_NEAR(conformal_factor(SpaceForm{-1.0}, Vec3d{0.5, 0, 0}), 8.0 / 3.0, 1e-15);
}

TEST(ConformalFactor, OutsideModelDomainThrows) {
    EXPECT_THROW(conformal_factor(SpaceForm{-1.0}, Vec3d{1, 0, 0}), DomainError);
    EXPECT_THROW(conformal_factor(SpaceForm{-4.0}, Vec3d{0.6, 0, 0}), DomainError);
    EXPECT_NO_THROW(conformal_factor(SpaceForm{-1.0}, Vec3d{0.99, 0, 0}));
}

TEST(CrossG, FlatIsEuclideanUpToScale) {
    const SpaceForm sf{0.0};
    const Vec3d c = cross_g(sf, Vec3d{0, 0, 0}, Vec3d{1, 0, 0}, Vec3d{0, 1, 0});
    const Vec3d e = cross(Vec3d{1, 0, 0}, Vec3d{0, 1, 0});
    EXPECT_EQ(e.z, 1.0);
    EXPECT_NEAR(norm(normalized(c) - e), 0.0, 1e-15);
}

TEST(CrossG, DefiningIdentityAndLagrange) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    for (double a : {-1.0, 0.0, 1.0}) {
        const SpaceForm sf{a};
        for (int n = 0; n < 50; ++n) {
            const Vec3d p{U(rng), U(rng), U(rng)}, A{U(rng), U(rng), U(rng)}, B{U(rng), U(rng), U(rng)},
                C{U(rng), U(rng), U(rng)};
            const Vec3d X = cross_g(sf, p, A, B);
            EXPECT_NEAR(metric(sf, p, X, C), det_g(sf, p, A, B, C), 1e-12);
            const double gab = metric(sf, p, A, B);
            EXPECT_NEAR(metric(sf, p, X, X), metric(sf, p, A, A) * metric(sf, p, B, B) - gab * gab, 1e-12);
        }
    }
    const SpaceForm sf{1.0};
    const Vec3d p{1, 0, 0}, A{1, 0, 0}, B{0, 1, 0};
    const Vec3d C = cross_g(sf, p, A, B);
    EXPECT_NEAR(metric(sf, p, C, C), metric(sf, p, A, A) * metric(sf, p, B, B), 1e-15);
}

TEST(Christoffel, VanishAtOriginAndSymmetric) {
    for (double a : {-1.0, 0.5, 1.0}) {
        const auto G0 = christoffel_symbols(SpaceForm{a}, Vec3d{0, 0, 0});
        for (const auto& m : G0)
            for (const auto& r : m)
                for (double x : r) EXPECT_EQ(x, 0.0);
        const auto G = christoffel_symbols(SpaceForm{a}, Vec3d{0.1, -0.2, 0.3});
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) EXPECT_EQ(G[k][i][j], G[k][j][i]);
    }
}

TEST(Christoffel, MatchesFiniteDifferenceOfMetric) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-0.4, 0.4);
    for (double a : {-1.0, 1.0}) {
        const SpaceForm sf{a};
        for (int n = 0; n < 20; ++n) {
            const Vec3d p{U(rng), U(rng), U(rng)}, X{U(rng), U(rng), U(rng)}, Y{U(rng), U(rng), U(rng)};
            EXPECT_NEAR(norm(christoffel(sf, p, X, Y) - numeric_christoffel(sf, p, X, Y)), 0.0, 1e-8);
        }
    }
}

TEST(CovariantDerivative, FlatIsPartialDerivative) {
    const Vec3j F = germ_jet("(u^2 + v, u*v, sin(u))", 0.3, -0.2, 4);
    const Vec3j W = germ_jet("(v, u^3, cos(v))", 0.3, -0.2, 4);
    const Vec3j n = covariant_derivative(SpaceForm{0.0}, F, W, Direction::U);
    EXPECT_EQ(norm(values(n) - values(derivative_u(W))), 0.0);
}

TEST(CovariantDerivative, OriginIsPartialDerivative) {
    // f(o) = 0 so the Christoffel term vanishes at o
    const Vec3j F = germ_jet("(u^2 + v, u^3 + u*v, v^2)", 0.0, 0.0, 4);
    for (double a : {-1.0, 1.0}) {
        const Vec3j n = covariant_derivative(SpaceForm{a}, F, derivative_u(F), Direction::V);
        EXPECT_NEAR(norm(values(n) - partial(F, 1, 1)), 0.0, 1e-15);
    }
}

TEST(CovariantDerivative, ParallelTransportOracle) {
    // nabla_u W at (u0, v0) from parallel transport of W(u0 +- h) back to u0,
    // with the transport ODE driven by numerically differentiated Christoffels.
    const SpaceForm sf{1.0};
    const double u0 = 0.3, v0 = 0.2;
    auto curve = [&](double u) { return Vec3d{u, v0, 0}; };
    const Vec3d W{1, 0, 0};  // f_u of f = (u, v, 0)
    auto transport = [&](double from, double to) {
        const int n = 200;
        const double h = (to - from) / n;
        Vec3d P = W;
        auto rhs = [&](double s, const Vec3d& X) { return -1.0 * numeric_christoffel(sf, curve(s), Vec3d{1, 0, 0}, X); };
        double s = from;
        for (int i = 0; i < n; ++i) {
            const Vec3d k1 = rhs(s, P), k2 = rhs(s + h / 2, P + (h / 2) * k1), k3 = rhs(s + h / 2, P + (h / 2) * k2),
                        k4 = rhs(s + h, P + h * k3);
            P = P + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s += h;
        }
        return P;
    };
    const double h = 1e-3;
    const Vec3d oracle = (transport(u0 + h, u0) - transport(u0 - h, u0)) / (2 * h);
    const Vec3j F = germ_jet("(u, v, 0)", u0, v0, 3);
    const Vec3d nab = values(covariant_derivative(sf, F, derivative_u(F), Direction::U));
    EXPECT_NEAR(norm(nab - oracle), 0.0, 1e-5);
}

TEST(CovariantDerivative, TorsionFreeAt200Points) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    const char* germs[] = {"(u^2 + 2*v, u^3 + 3*u*v, v^2)", "(sin(u) + v, u*v^2, cos(v) - 1)",
                           "(u + v^3, exp(u*v) - 1, u^2 - v)", "(u*u/2 + v, u^3/3 + u*v, u^4/4 + u^2*v - v^3)"};
    int count = 0;
    for (int n = 0; n < 200; ++n) {
        const double a = (n % 3) - 1.0;
        const Vec3j F = germ_jet(germs[n % 4], U(rng), U(rng), 4);
        const Vec3j fuv = covariant_derivative(SpaceForm{a}, F, derivative_v(F), Direction::U);
        const Vec3j fvu = covariant_derivative(SpaceForm{a}, F, derivative_u(F), Direction::V);
        EXPECT_LT(norm(values(fuv) - values(fvu)), 1e-9);
        ++count;
    }
    EXPECT_EQ(count, 200);
}

TEST(CovariantDerivative, MetricCompatibility) {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    for (int n = 0; n < 30; ++n) {
        const double a = (n % 3) - 1.0;
        const SpaceForm sf{a};
        const double u0 = U(rng);
        const Vec3j c = germ_jet("(u + v, u^2 - v, u^3/2)", u0, 0.0, 4);
        const Vec3j X = germ_jet("(cos(u), u, 1 + u^2)", u0, 0.0, 4);
        const Vec3j Y = germ_jet("(u^3, sin(u), 2 - u)", u0, 0.0, 4);
        const Jet2 gxy = metric(sf, c, X, Y);
        const Vec3j nX = covariant_derivative(sf, c, X, Direction::U);
        const Vec3j nY = covariant_derivative(sf, c, Y, Direction::U);
        const Vec3d p = values(c);
        const double rhs = metric(sf, p, values(nX), values(Y)) + metric(sf, p, values(X), values(nY));
        EXPECT_NEAR(gxy.partial(1, 0), rhs, 1e-6);
    }
}
