#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace swallowkit {

/// Composite Gauss-Legendre rule for integrands of any vector-space type T
/// (double, Jet2, Vec3<...>).  f(x) must return T; zero is the additive unit.
template <class T, class F>
T integrate(F&& f, double a, double b, T zero, int panels = 4) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    T sum = zero;
    if (a == b) return sum;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h, half = 0.5 * h;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] == 0.0) {
                sum = sum + (w[k] * half) * f(mid);
            } else {
                sum = sum + (w[k] * half) * f(mid + half * x[k]);
                sum = sum + (w[k] * half) * f(mid - half * x[k]);
            }
        }
    }
    return sum;
}

/// Number of worker threads: SWALLOWKIT_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("SWALLOWKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Run body(i) for i in [0, n) on up to worker_count() threads.  The first
/// exception thrown by any task is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Chebyshev interpolant of a smooth function on [lo, hi].
class ChebyshevSeries {
public:
    ChebyshevSeries() = default;

    template <class F>
    ChebyshevSeries(F&& f, double lo, double hi, int n = 40) : lo_(lo), hi_(hi), c_(static_cast<std::size_t>(n), 0.0) {
        const double pi = std::acos(-1.0);
        std::vector<double> fx(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) fx[static_cast<std::size_t>(k)] = f(to_x(std::cos(pi * (k + 0.5) / n)));
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k) sum += fx[static_cast<std::size_t>(k)] * std::cos(pi * j * (k + 0.5) / n);
            c_[static_cast<std::size_t>(j)] = (j == 0 ? 1.0 : 2.0) * sum / n;
        }
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    /// Clenshaw evaluation; x may be a double or a jet in the original variable.
    template <class T>
    T operator()(const T& x) const {
        const T s = (2.0 * x - (hi_ + lo_)) * (1.0 / (hi_ - lo_));
        T b1 = 0.0 * s, b2 = 0.0 * s;
        for (std::size_t j = c_.size(); j-- > 1;) {
            const T b0 = 2.0 * s * b1 - b2 + c_[j];
            b2 = b1;
            b1 = b0;
        }
        return s * b1 - b2 + c_[0];
    }

    /// Largest of the last three coefficients, a proxy for the truncation error.
    double tail() const {
        double m = 0.0;
        for (std::size_t j = c_.size() >= 3 ? c_.size() - 3 : 0; j < c_.size(); ++j) m = std::max(m, std::abs(c_[j]));
        return m;
    }

private:
    double to_x(double s) const { return 0.5 * (hi_ + lo_) + 0.5 * (hi_ - lo_) * s; }

    double lo_ = -1.0, hi_ = 1.0;
    std::vector<double> c_;
};

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return xs;
}

}  // namespace swallowkit
