#pragma once
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "riskopt/errors.hpp"

namespace riskopt {

struct RootResult {
    double x;
    double fx;
    int iters;
};

// Safeguarded secant/bisection hybrid on a bracketing interval [a, b] with
// f(a) f(b) <= 0. Converges to |step| <= xtol*(1+|x|) or |f| <= ftol.
inline RootResult find_root(const std::function<double(double)>& f,
                            double a, double b, double fa, double fb,
                            double xtol = 1e-12, double ftol = 1e-10,
                            int maxit = 200) {
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if (fa * fb > 0.0)
        throw numerical_error("find_root: interval does not bracket a root");
    double width_two_ago = std::abs(b - a);
    for (int it = 1; it <= maxit; ++it) {
        const double lo = std::min(a, b), hi = std::max(a, b);
        const double width = hi - lo;
        // secant proposal; fall back to bisection when it leaves the bracket
        // or when the bracket failed to halve over the last two iterations
        double x = fb != fa ? b - fb * (b - a) / (fb - fa) : 0.5 * (a + b);
        const bool stalled = it > 2 && width > 0.5 * width_two_ago;
        if (!(x > lo) || !(x < hi) || (stalled && it % 2 == 0)) x = 0.5 * (a + b);
        if (it % 2 == 0) width_two_ago = width;

        const double fx = f(x);
        if (std::abs(fx) <= ftol || width <= xtol * (1.0 + std::abs(x)))
            return {x, fx, it};
        if (fa * fx <= 0.0) {
            b = x; fb = fx;
        } else {
            a = x; fa = fx;
        }
    }
    throw numerical_error("find_root: no convergence within iteration budget");
}

// Expands [lo, hi] geometrically (factor 2 outward on both ends, staying > 0)
// until f changes sign; returns the bracket and end values. Throws
// infeasible_error when no sign change exists in (0, ~1e30) -- for monotone
// budget/constraint residuals that means the target is unreachable.
inline RootResult solve_monotone(const std::function<double(double)>& f,
                                 double lo, double hi,
                                 const char* what,
                                 double xtol = 1e-12, double ftol = 1e-10) {
    double flo = f(lo), fhi = f(hi);
    int guard = 0;
    while (flo * fhi > 0.0 && guard++ < 200) {
        if (std::abs(flo) < std::abs(fhi)) {
            lo /= 2.0;
            flo = f(lo);
        } else {
            hi *= 2.0;
            fhi = f(hi);
        }
        if (lo < 1e-300 || hi > 1e300) break;
    }
    if (flo * fhi > 0.0) {
        std::ostringstream os;
        os << what << ": no sign change in searched bracket [" << lo << ", " << hi << "]";
        throw infeasible_error(os.str());
    }
    return find_root(f, lo, hi, flo, fhi, xtol, ftol);
}

} // namespace riskopt
