#pragma once
#include <cmath>

namespace riskopt {

// Black-Scholes market: dS = mu S dt + sigma S dW, bond rate r, S0 = 1.
struct MarketParams {
    double mu;
    double sigma;
    double r;
    double kappa; // market price of risk, (mu - r)/sigma

    static MarketParams make(double mu, double sigma, double r);
};

// Law of a lognormal variable: ln X ~ N(m, s^2). s == 0 encodes the
// degenerate point mass at exp(m) (exact, not a tiny-s stand-in).
struct LognormalLaw {
    double m;
    double s;

    bool degenerate() const { return s == 0.0; }
    double mean() const { return std::exp(m + 0.5 * s * s); }
    double cdf(double x) const;
    double pdf(double x) const;
    double quantile(double p) const;
};

// Law of the state-price density H_t = exp(-(r + kappa^2/2) t - kappa W_t).
LognormalLaw state_price_law(const MarketParams& mkt, double t);

// H_t as a function of the stock price (S0 = 1) and back. The two processes
// are driven by the same Brownian path, so each determines the other.
double h_from_stock(const MarketParams& mkt, double t, double s_t);
double stock_from_h(const MarketParams& mkt, double t, double z);

} // namespace riskopt
