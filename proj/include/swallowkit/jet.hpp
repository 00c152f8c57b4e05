#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace swallowkit {

inline constexpr int kDefaultJetOrder = 4;
inline constexpr int kMaxJetOrder = 10;

constexpr std::size_t jet_size(int order) { return static_cast<std::size_t>((order + 1) * (order + 2) / 2); }

/// Truncated bivariate Taylor polynomial of order K at a base point (u0, v0).
///
/// coefficient(i, j) is d^{i+j} f / du^i dv^j (u0, v0) / (i! j!).  Coefficients
/// are stored by total degree: index(i, j) = n(n+1)/2 + j with n = i + j.
/// Binary operations between jets of different order truncate to the smaller.
class Jet2 {
public:
    Jet2() : order_(0) { c_.fill(0.0); }
    explicit Jet2(int order, double value = 0.0) : order_(order) {
        if (order < 0 || order > kMaxJetOrder) throw DomainError("jet order out of range");
        c_.fill(0.0);
        c_[0] = value;
    }

    static Jet2 constant(int order, double value) { return Jet2(order, value); }
    static Jet2 variable_u(int order, double u0) {
        Jet2 j(order, u0);
        if (order >= 1) j.at(1, 0) = 1.0;
        return j;
    }
    static Jet2 variable_v(int order, double v0) {
        Jet2 j(order, v0);
        if (order >= 1) j.at(0, 1) = 1.0;
        return j;
    }

    static constexpr std::size_t size_for(int order) { return jet_size(order); }
    static constexpr std::size_t index(int i, int j) {
        const int n = i + j;
        return static_cast<std::size_t>(n * (n + 1) / 2 + j);
    }

    int order() const noexcept { return order_; }
    double value() const noexcept { return c_[0]; }

    /// Taylor coefficient; zero outside the stored triangle.
    double operator()(int i, int j) const noexcept {
        if (i < 0 || j < 0 || i + j > order_) return 0.0;
        return c_[index(i, j)];
    }
    double& at(int i, int j) { return c_[index(i, j)]; }

    /// Partial derivative d^{i+j}/du^i dv^j at the base point.
    double partial(int i, int j) const noexcept {
        return (*this)(i, j) * factorial(i) * factorial(j);
    }

    std::span<const double> coefficients() const noexcept { return {c_.data(), size_for(order_)}; }

    double max_abs() const noexcept {
        double m = 0.0;
        for (std::size_t k = 0; k < size_for(order_); ++k) m = std::max(m, std::abs(c_[k]));
        return m;
    }

    Jet2 truncated(int k) const {
        k = std::min(k, order_);
        Jet2 r(k);
        std::copy_n(c_.begin(), size_for(k), r.c_.begin());
        return r;
    }

    /// Evaluate the polynomial at an offset (du, dv) from the base point.
    double evaluate(double du, double dv) const noexcept {
        double s = 0.0;
        for (int n = order_; n >= 0; --n) {
            double row = 0.0;
            for (int j = 0; j <= n; ++j) row += c_[index(n - j, j)] * std::pow(du, n - j) * std::pow(dv, j);
            s += row;
        }
        return s;
    }

    Jet2 derivative_u() const {
        if (order_ == 0) throw DomainError("cannot differentiate an order-0 jet");
        Jet2 r(order_ - 1);
        for (int n = 0; n < order_; ++n)
            for (int j = 0; j <= n; ++j) r.at(n - j, j) = (n - j + 1) * (*this)(n - j + 1, j);
        return r;
    }
    Jet2 derivative_v() const {
        if (order_ == 0) throw DomainError("cannot differentiate an order-0 jet");
        Jet2 r(order_ - 1);
        for (int n = 0; n < order_; ++n)
            for (int j = 0; j <= n; ++j) r.at(n - j, j) = (j + 1) * (*this)(n - j, j + 1);
        return r;
    }

    /// Jet of g with f = v * g, valid at a base point on the u-axis.  Throws if
    /// some coefficient c_{i0} exceeds tol * (1 + max|c|).
    Jet2 divided_by_v(double tol = 1e-9) const {
        if (order_ == 0) throw DomainError("cannot divide an order-0 jet by v");
        const double scale = 1.0 + max_abs();
        for (int i = 0; i <= order_; ++i)
            if (std::abs((*this)(i, 0)) > tol * scale)
                throw DomainError("function does not vanish on the u-axis (coefficient c_" +
                                  std::to_string(i) + "0 = " + std::to_string((*this)(i, 0)) + ")");
        Jet2 r(order_ - 1);
        for (int n = 0; n < order_; ++n)
            for (int j = 0; j <= n; ++j) r.at(n - j, j) = (*this)(n - j, j + 1);
        return r;
    }

    /// Jet of v * f at a base point on the u-axis; exact, order grows by one.
    Jet2 multiplied_by_v() const {
        Jet2 r(order_ + 1);
        for (int n = 0; n <= order_; ++n)
            for (int j = 0; j <= n; ++j) r.at(n - j, j + 1) = (*this)(n - j, j);
        return r;
    }

    /// Same as divided_by_v but in the u variable, for a base point on the v-axis.
    Jet2 divided_by_u(double tol = 1e-9) const {
        if (order_ == 0) throw DomainError("cannot divide an order-0 jet by u");
        const double scale = 1.0 + max_abs();
        for (int j = 0; j <= order_; ++j)
            if (std::abs((*this)(0, j)) > tol * scale)
                throw DomainError("function does not vanish on the v-axis");
        Jet2 r(order_ - 1);
        for (int n = 0; n < order_; ++n)
            for (int j = 0; j <= n; ++j) r.at(n - j, j) = (*this)(n - j + 1, j);
        return r;
    }

    Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
    Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
    Jet2& operator/=(const Jet2& o) { return *this = *this / o; }
    Jet2& operator+=(double s) { c_[0] += s; return *this; }
    Jet2& operator-=(double s) { c_[0] -= s; return *this; }
    Jet2& operator*=(double s) { for (std::size_t k = 0; k < size_for(order_); ++k) c_[k] *= s; return *this; }
    Jet2& operator/=(double s) { for (std::size_t k = 0; k < size_for(order_); ++k) c_[k] /= s; return *this; }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r(std::min(a.order_, b.order_));
        for (std::size_t k = 0; k < size_for(r.order_); ++k) r.c_[k] = a.c_[k] + b.c_[k];
        return r;
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r(std::min(a.order_, b.order_));
        for (std::size_t k = 0; k < size_for(r.order_); ++k) r.c_[k] = a.c_[k] - b.c_[k];
        return r;
    }
    friend Jet2 operator-(const Jet2& a) {
        Jet2 r = a;
        r *= -1.0;
        return r;
    }
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        const int K = std::min(a.order_, b.order_);
        Jet2 r(K);
        for (int n1 = 0; n1 <= K; ++n1)
            for (int j1 = 0; j1 <= n1; ++j1) {
                const double x = a.c_[index(n1 - j1, j1)];
                if (x == 0.0) continue;
                for (int n2 = 0; n1 + n2 <= K; ++n2)
                    for (int j2 = 0; j2 <= n2; ++j2)
                        r.c_[index(n1 - j1 + n2 - j2, j1 + j2)] += x * b.c_[index(n2 - j2, j2)];
            }
        return r;
    }
    friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

    friend Jet2 operator+(Jet2 a, double s) { a.c_[0] += s; return a; }
    friend Jet2 operator+(double s, Jet2 a) { a.c_[0] += s; return a; }
    friend Jet2 operator-(Jet2 a, double s) { a.c_[0] -= s; return a; }
    friend Jet2 operator-(double s, const Jet2& a) { Jet2 r = -a; r.c_[0] += s; return r; }
    friend Jet2 operator*(Jet2 a, double s) { a *= s; return a; }
    friend Jet2 operator*(double s, Jet2 a) { a *= s; return a; }
    friend Jet2 operator/(Jet2 a, double s) { a /= s; return a; }
    friend Jet2 operator/(double s, const Jet2& a) { return s * reciprocal(a); }

    /// Compose a univariate Taylor series sum_k d_k (x - x0)^k, x0 = value(),
    /// with this jet.  d must hold at least order()+1 entries.
    Jet2 compose_series(std::span<const double> d) const {
        Jet2 delta = *this;
        delta.c_[0] = 0.0;
        const int K = order_;
        Jet2 r(K, d[static_cast<std::size_t>(K)]);
        for (int k = K - 1; k >= 0; --k) {
            r = r * delta;
            r.c_[0] += d[static_cast<std::size_t>(k)];
        }
        return r;
    }

    friend Jet2 reciprocal(const Jet2& a) {
        const double x0 = a.value();
        if (x0 == 0.0 || !std::isfinite(x0))
            throw DomainError("division by a jet with zero constant term");
        std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
        double p = 1.0 / x0;
        for (int k = 0; k <= a.order_; ++k) {
            d[static_cast<std::size_t>(k)] = (k % 2 == 0 ? p : -p);
            p /= x0;
        }
        return a.compose_series(d);
    }

    friend Jet2 exp(const Jet2& a) {
        std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
        const double e = std::exp(a.value());
        for (int k = 0; k <= a.order_; ++k) d[static_cast<std::size_t>(k)] = e / factorial(k);
        return a.compose_series(d);
    }
    friend Jet2 sin(const Jet2& a) { return a.compose_series(cyclic_series(a, std::sin(a.value()), std::cos(a.value()), -1.0)); }
    friend Jet2 cos(const Jet2& a) { return a.compose_series(cyclic_series(a, std::cos(a.value()), -std::sin(a.value()), -1.0)); }
    friend Jet2 sinh(const Jet2& a) { return a.compose_series(cyclic_series(a, std::sinh(a.value()), std::cosh(a.value()), 1.0)); }
    friend Jet2 cosh(const Jet2& a) { return a.compose_series(cyclic_series(a, std::cosh(a.value()), std::sinh(a.value()), 1.0)); }

    friend Jet2 sqrt(const Jet2& a) {
        const double x0 = a.value();
        if (!(x0 > 0.0)) throw DomainError("sqrt of a jet with non-positive constant term");
        std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
        double binom = 1.0;  // binomial(1/2, k)
        for (int k = 0; k <= a.order_; ++k) {
            d[static_cast<std::size_t>(k)] = binom * std::pow(x0, 0.5 - k);
            binom *= (0.5 - k) / (k + 1);
        }
        return a.compose_series(d);
    }

    friend Jet2 log(const Jet2& a) {
        const double x0 = a.value();
        if (!(x0 > 0.0)) throw DomainError("log of a jet with non-positive constant term");
        std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
        d[0] = std::log(x0);
        for (int k = 1; k <= a.order_; ++k) d[static_cast<std::size_t>(k)] = ((k % 2) ? 1.0 : -1.0) / (k * std::pow(x0, k));
        return a.compose_series(d);
    }

    friend Jet2 pow(const Jet2& a, int n) {
        if (n < 0) return reciprocal(pow(a, -n));
        Jet2 result(a.order_, 1.0);
        Jet2 base = a;
        while (n > 0) {
            if (n & 1) result = result * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return result;
    }

    /// Substitute (u, v) -> (U, V) where U, V are jets whose values equal the
    /// base point of this jet.  The result is truncated to the smallest order.
    Jet2 compose(const Jet2& U, const Jet2& V) const {
        const int K = std::min({order_, U.order_, V.order_});
        Jet2 du = U.truncated(K), dv = V.truncated(K);
        du.c_[0] = 0.0;
        dv.c_[0] = 0.0;
        std::vector<Jet2> pu(static_cast<std::size_t>(K) + 1, Jet2(K, 1.0)), pv = pu;
        for (int k = 1; k <= K; ++k) {
            pu[static_cast<std::size_t>(k)] = pu[static_cast<std::size_t>(k - 1)] * du;
            pv[static_cast<std::size_t>(k)] = pv[static_cast<std::size_t>(k - 1)] * dv;
        }
        Jet2 r(K);
        for (int n = 0; n <= K; ++n)
            for (int j = 0; j <= n; ++j) {
                const double c = (*this)(n - j, j);
                if (c == 0.0) continue;
                r += c * (pu[static_cast<std::size_t>(n - j)] * pv[static_cast<std::size_t>(j)]);
            }
        return r;
    }

    static double factorial(int n) noexcept {
        static constexpr std::array<double, 13> table{1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880,
                                                      3628800, 39916800, 479001600};
        if (n < 13) return table[static_cast<std::size_t>(n)];
        double f = table[12];
        for (int k = 13; k <= n; ++k) f *= k;
        return f;
    }

private:
    static std::vector<double> cyclic_series(const Jet2& a, double f0, double f1, double sign) {
        std::vector<double> d(static_cast<std::size_t>(a.order_) + 1);
        for (int k = 0; k <= a.order_; ++k) {
            const double base = (k % 2 == 0) ? f0 : f1;
            const double s = ((k / 2) % 2 == 0) ? 1.0 : sign;
            d[static_cast<std::size_t>(k)] = s * base / factorial(k);
        }
        return d;
    }

    int order_;
    std::array<double, jet_size(kMaxJetOrder)> c_;
};

}  // namespace swallowkit
