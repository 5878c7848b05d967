#pragma once
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskopt {

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779;

inline double norm_pdf(double x) {
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

// Inverse standard-normal CDF. Hastings start (A&S 26.2.22), polished by
// Newton on erfc-based Phi; accurate to ~1 ulp over p in (1e-300, 1-1e-16).
inline double norm_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("norm_quantile: p outside [0,1]");
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    const double pl = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pl));
    double x = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
    if (p < 0.5) x = -x;

    for (int i = 0; i < 4; ++i) {
        const double err = norm_cdf(x) - p;
        const double d = norm_pdf(x);
        if (d <= 0.0) break; // far tail: the start value is already as good as it gets
        double dx = err / d;
        // Halley correction keeps the tail steps stable
        dx /= (1.0 + 0.5 * dx * x);
        x -= dx;
        if (std::abs(dx) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

} // namespace riskopt
