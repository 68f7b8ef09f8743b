#pragma once

#include <cmath>
#include <limits>

// Scalar log-domain helpers shared by the solvers. Internal to the library.
namespace statgames::num {

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

inline double safe_log(double x) { return x > 0 ? std::log(x) : -inf; }

inline double softplus(double x) {
    if (x > 35) return x;
    if (x < -35) return std::exp(x);
    return std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

// log(e^a + e^b), tolerating -inf on either side
inline double logadd(double a, double b) {
    if (a == -inf) return b;
    if (b == -inf) return a;
    double hi = a > b ? a : b;
    return hi + std::log1p(std::exp(-(a > b ? a - b : b - a)));
}

} // namespace statgames::num
