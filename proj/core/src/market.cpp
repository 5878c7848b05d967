#include "riskopt/market.hpp"

#include <limits>
#include <stdexcept>

#include "riskopt/normal.hpp"

namespace riskopt {

MarketParams MarketParams::make(double mu, double sigma, double r) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("MarketParams: sigma must be > 0");
    if (!std::isfinite(mu) || !std::isfinite(r))
        throw std::invalid_argument("MarketParams: non-finite coefficient");
    return MarketParams{mu, sigma, r, (mu - r) / sigma};
}

double LognormalLaw::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (degenerate()) return x >= std::exp(m) ? 1.0 : 0.0;
    return norm_cdf((std::log(x) - m) / s);
}

double LognormalLaw::pdf(double x) const {
    if (x <= 0.0 || degenerate()) return 0.0;
    const double u = (std::log(x) - m) / s;
    return norm_pdf(u) / (s * x);
}

double LognormalLaw::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("LognormalLaw::quantile: p outside [0,1]");
    if (degenerate()) return std::exp(m);
    if (p == 0.0) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::exp(m + s * norm_quantile(p));
}

LognormalLaw state_price_law(const MarketParams& mkt, double t) {
    if (t < 0.0)
        throw std::invalid_argument("state_price_law: t must be >= 0");
    const double m = -(mkt.r + 0.5 * mkt.kappa * mkt.kappa) * t;
    const double s = std::abs(mkt.kappa) * std::sqrt(t);
    return LognormalLaw{m, s};
}

double h_from_stock(const MarketParams& mkt, double t, double s_t) {
    if (!(s_t > 0.0))
        throw std::invalid_argument("h_from_stock: stock price must be > 0");
    if (t < 0.0)
        throw std::invalid_argument("h_from_stock: t must be >= 0");
    const double k = mkt.kappa;
    const double drift = (mkt.mu - 0.5 * mkt.sigma * mkt.sigma) * t;
    return std::exp(-(mkt.r + 0.5 * k * k) * t - (k / mkt.sigma) * (std::log(s_t) - drift));
}

double stock_from_h(const MarketParams& mkt, double t, double z) {
    if (!(z > 0.0))
        throw std::invalid_argument("stock_from_h: state-price value must be > 0");
    if (t < 0.0)
        throw std::invalid_argument("stock_from_h: t must be >= 0");
    if (mkt.kappa == 0.0)
        throw std::invalid_argument("stock_from_h: undefined for kappa = 0 (H carries no stock information)");
    if (t == 0.0) {
        if (z != 1.0)
            throw std::invalid_argument("stock_from_h: at t = 0 only z = 1 is valid (H0 = 1)");
        return 1.0;
    }
    const double k = mkt.kappa;
    const double drift = (mkt.mu - 0.5 * mkt.sigma * mkt.sigma) * t;
    return std::exp(drift - (mkt.sigma / k) * (std::log(z) + (mkt.r + 0.5 * k * k) * t));
}

} // namespace riskopt
