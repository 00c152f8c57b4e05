#pragma once

#include <cmath>
#include <string>

namespace swallowkit {

enum class Sign { Negative = -1, Zero = 0, Positive = 1, Indeterminate = 2 };

struct SignTolerance {
    double zero = 1e-12;        // |x| <= zero*(1+scale)  -> Zero
    double indeterminate = 1e-9;  // |x| <  indeterminate*(1+scale) -> Indeterminate
};

inline Sign classify_sign(double x, double scale = 1.0, SignTolerance tol = {}) {
    if (std::isnan(x)) return Sign::Indeterminate;
    const double s = 1.0 + std::abs(scale);
    if (std::abs(x) <= tol.zero * s) return Sign::Zero;
    if (std::abs(x) < tol.indeterminate * s) return Sign::Indeterminate;
    return x > 0 ? Sign::Positive : Sign::Negative;
}

inline int to_int(Sign s) {
    switch (s) {
        case Sign::Negative: return -1;
        case Sign::Positive: return 1;
        default: return 0;
    }
}

inline Sign negate(Sign s) {
    switch (s) {
        case Sign::Negative: return Sign::Positive;
        case Sign::Positive: return Sign::Negative;
        default: return s;
    }
}

inline Sign product(Sign a, Sign b) {
    if (a == Sign::Indeterminate || b == Sign::Indeterminate) return Sign::Indeterminate;
    const int p = to_int(a) * to_int(b);
    return p > 0 ? Sign::Positive : (p < 0 ? Sign::Negative : Sign::Zero);
}

inline bool is_definite(Sign s) { return s == Sign::Positive || s == Sign::Negative; }

inline std::string to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "-1";
        case Sign::Zero: return "0";
        case Sign::Positive: return "+1";
        case Sign::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

}  // namespace swallowkit
