#pragma once
#include <vector>

#include "riskopt/lognormal.hpp"
#include "riskopt/market.hpp"
#include "riskopt/profile.hpp"

namespace riskopt {

// Deterministic pieces of the closed-form wealth F(z,t) and exposure
// Theta(z,t). One canonical d-pair is used everywhere: d_price multiplies
// the discounted-floor terms, d_wealth = d_price + kappa sqrt(tau)/gamma the
// wealth-like terms. (The pricing oracle fixes the assignment; see tests.)
struct PreHorizonTerms {
    double tau;      // T - t
    double sq;       // kappa * sqrt(tau)
    double gamma;
    double gamma_t;  // Gamma(t) = ((1-gamma)/gamma)(r + kappa^2/(2 gamma)) tau
    double a;        // -(r + kappa^2/2) tau
    double b;        // -kappa sqrt(tau)
    double disc;     // e^{-r tau}

    static PreHorizonTerms make(const MarketParams& mkt, double gamma, double T, double t);

    double d_price(double u, double z) const;
    double d_wealth(double u, double z) const;
    double c2(double h_bar, double z) const; // (ln(h_bar/z) - a)/b
};

struct CurveSample {
    double h;                 // state-price abscissa
    double s;                 // stock-price abscissa (NaN if kappa = 0)
    double wealth;            // F(z, t)
    double fraction;          // theta_t
    double relative_exposure; // Theta(z, t); fraction = theta_N * Theta
};

CurveSample wealth_and_fraction_var(const TerminalProfile& p, const MarketParams& mkt,
                                    double T, double t, double z);
CurveSample wealth_and_fraction_el(const TerminalProfile& p, const MarketParams& mkt,
                                   double T, double t, double z,
                                   const QuadratureConfig& cfg = {});
CurveSample wealth_and_fraction_eul(const TerminalProfile& p, const MarketParams& mkt,
                                    double T, double t, double z);

// Dispatch on profile.kind (covers the benchmark strategies too).
CurveSample wealth_and_fraction(const TerminalProfile& p, const MarketParams& mkt,
                                double T, double t, double z,
                                const QuadratureConfig& cfg = {});

// Samples along a strictly increasing stock-price grid.
std::vector<CurveSample> curve(const TerminalProfile& p, const MarketParams& mkt, double T,
                               double t, const std::vector<double>& stock_grid,
                               const QuadratureConfig& cfg = {});

} // namespace riskopt
