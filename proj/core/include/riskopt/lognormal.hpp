#pragma once
#include <functional>

#include "riskopt/market.hpp"

namespace riskopt {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;
};

// E[X^a ; lo <= X < hi] for X ~ law. Closed form:
//   exp(a m + a^2 s^2 / 2) * [Phi((ln hi - m - a s^2)/s) - Phi((ln lo - m - a s^2)/s)]
// with ln 0 = -inf. Handles the degenerate s = 0 law exactly.
double partial_power_expectation(const LognormalLaw& law, double a, double lo, double hi);

// E[ln X ; lo <= X < hi] for X ~ law.
double partial_log_expectation(const LognormalLaw& law, double lo, double hi);

// (1/sqrt(2 pi)) * integral of f(u) exp(-u^2/2) du over (-inf, alpha],
// adaptive Gauss-Legendre panels after truncating the tails at 15 standard
// deviations (normal mass beyond that is < 4e-51, far below abs_tol).
double integrate_gaussian(const std::function<double(double)>& f, double alpha,
                          const QuadratureConfig& cfg = {});

// Same weight over the finite window [lo, hi].
double integrate_gaussian(const std::function<double(double)>& f, double lo, double hi,
                          const QuadratureConfig& cfg = {});

// psi0(alpha, beta, c1, c2, m, s, delta)
//   = (1/(sqrt(2 pi) s)) * integral_{-inf}^{alpha} exp(-(u-m)^2/(2 s^2))
//                                                  / (c1 e^{beta u} - c2)^delta du
// Requires c1 e^{beta u} - c2 > 0 on the whole domain.
double psi0(double alpha, double beta, double c1, double c2, double m, double s,
            double delta, const QuadratureConfig& cfg = {});

} // namespace riskopt
