#include "riskopt/prehorizon.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskopt/normal.hpp"

namespace riskopt {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double theta_normal(const MarketParams& mkt, double gamma) {
    return mkt.kappa / (gamma * mkt.sigma);
}

void check_time(double T, double t) {
    if (!(t >= 0.0) || !(t < T))
        throw std::invalid_argument("prehorizon: requires 0 <= t < T");
}

double stock_or_nan(const MarketParams& mkt, double t, double z) {
    if (mkt.kappa == 0.0) return kNaN;
    return t == 0.0 ? 1.0 : stock_from_h(mkt, t, z);
}

// Conditional price at H_t = z of the payoff coef * H_T^expo:
//   coef z^expo E[R^{1+expo}],  ln R ~ N(a, sq^2).
double power_conditional_price(const PreHorizonTerms& pt, double coef, double expo,
                               double z) {
    const double p = 1.0 + expo;
    return coef * std::pow(z, expo) * std::exp(p * pt.a + 0.5 * p * p * pt.sq * pt.sq);
}
} // namespace

PreHorizonTerms PreHorizonTerms::make(const MarketParams& mkt, double gamma, double T,
                                      double t) {
    check_time(T, t);
    PreHorizonTerms pt;
    pt.tau = T - t;
    pt.sq = mkt.kappa * std::sqrt(pt.tau);
    pt.gamma = gamma;
    pt.gamma_t = gamma == 1.0
                     ? 0.0
                     : (1.0 - gamma) / gamma *
                           (mkt.r + mkt.kappa * mkt.kappa / (2.0 * gamma)) * pt.tau;
    pt.a = -(mkt.r + 0.5 * mkt.kappa * mkt.kappa) * pt.tau;
    pt.b = -pt.sq;
    pt.disc = std::exp(pt.a + 0.5 * pt.sq * pt.sq); // e^{-r tau}
    return pt;
}

double PreHorizonTerms::d_price(double u, double z) const {
    // (ln(u/z) + (r - kappa^2/2) tau)/(kappa sqrt(tau)); note -a - sq^2 = (r - k^2/2) tau
    return (std::log(u / z) - a - sq * sq) / sq;
}

double PreHorizonTerms::d_wealth(double u, double z) const {
    return d_price(u, z) + sq / gamma;
}

double PreHorizonTerms::c2(double h_bar, double z) const {
    return (std::log(h_bar / z) - a) / b;
}

CurveSample wealth_and_fraction_var(const TerminalProfile& p, const MarketParams& mkt,
                                    double T, double t, double z) {
    if (p.kind != ConstraintKind::VaR && p.kind != ConstraintKind::Unconstrained)
        throw std::invalid_argument("wealth_and_fraction_var: wrong profile kind");
    if (!(z > 0.0)) throw std::invalid_argument("wealth_and_fraction_var: z must be > 0");
    const PreHorizonTerms pt = PreHorizonTerms::make(mkt, p.gamma, T, t);
    const double g = p.gamma;
    const double w = std::exp(pt.gamma_t) * std::pow(p.y * z, -1.0 / g);

    const double dp_lo = pt.d_price(p.h_lo, z), dw_lo = pt.d_wealth(p.h_lo, z);
    const double dp_hi = pt.d_price(p.h_hi, z), dw_hi = pt.d_wealth(p.h_hi, z);
    const double floor_pv = p.q * pt.disc;

    const double A = w * (norm_cdf(dw_lo) + norm_cdf(-dw_hi));
    const double B = floor_pv * (norm_cdf(dp_hi) - norm_cdf(dp_lo));
    const double F = A + B;

    const double hump = w * (norm_pdf(dw_lo) - norm_pdf(dw_hi)) +
                        floor_pv * (norm_pdf(dp_hi) - norm_pdf(dp_lo));
    const double theta_rel = 1.0 - B / F + (g / (pt.sq * F)) * hump;
    return CurveSample{z, stock_or_nan(mkt, t, z), F,
                       theta_normal(mkt, g) * theta_rel, theta_rel};
}

CurveSample wealth_and_fraction_el(const TerminalProfile& p, const MarketParams& mkt,
                                   double T, double t, double z,
                                   const QuadratureConfig& cfg) {
    if (p.kind != ConstraintKind::EL)
        throw std::invalid_argument("wealth_and_fraction_el: wrong profile kind");
    if (!(z > 0.0)) throw std::invalid_argument("wealth_and_fraction_el: z must be > 0");
    const PreHorizonTerms pt = PreHorizonTerms::make(mkt, p.gamma, T, t);
    const double g = p.gamma;
    const double y1 = p.y, y2 = p.y2;
    const double w = std::exp(pt.gamma_t) * std::pow(y1 * z, -1.0 / g);

    const double dp_lo = pt.d_price(p.h_lo, z), dw_lo = pt.d_wealth(p.h_lo, z);
    const double dp_hi = pt.d_price(p.h_hi, z);
    const double floor_pv = p.q * pt.disc;
    const double c2v = pt.c2(p.h_hi, z);
    // the integrand argument is y1 * z * e^{a + b u} (the conditional
    // state-price value), not y1 * t * e^{a + b u}
    const double c1 = y1 * z * std::exp(pt.a);

    const double A = w * norm_cdf(dw_lo);
    const double B = p.h_lo < p.h_hi ? floor_pv * (norm_cdf(dp_hi) - norm_cdf(dp_lo)) : 0.0;
    const double G = pt.disc * psi0(c2v, pt.b, c1, y2, pt.b, 1.0, 1.0 / g, cfg);
    const double F = A + B + G;

    const double term1 = w * (norm_cdf(dw_lo) + g / pt.sq * norm_pdf(dw_lo));
    const double term2 = -(g * floor_pv / pt.sq) * norm_pdf(dp_lo);
    const double term3 =
        y1 * z * std::exp((mkt.kappa * mkt.kappa - 2.0 * mkt.r) * pt.tau) *
        psi0(c2v, pt.b, c1, y2, 2.0 * pt.b, 1.0, 1.0 + 1.0 / g, cfg);
    const double theta_rel = (term1 + term2 + term3) / F;
    return CurveSample{z, stock_or_nan(mkt, t, z), F,
                       theta_normal(mkt, g) * theta_rel, theta_rel};
}

CurveSample wealth_and_fraction_eul(const TerminalProfile& p, const MarketParams& mkt,
                                    double T, double t, double z) {
    if (p.kind != ConstraintKind::EUL)
        throw std::invalid_argument("wealth_and_fraction_eul: wrong profile kind");
    if (!(z > 0.0)) throw std::invalid_argument("wealth_and_fraction_eul: z must be > 0");
    const PreHorizonTerms pt = PreHorizonTerms::make(mkt, p.gamma, T, t);
    const double g = p.gamma;
    const double w = std::exp(pt.gamma_t) * std::pow(p.y * z, -1.0 / g);

    const double dp_lo = pt.d_price(p.h_lo, z), dw_lo = pt.d_wealth(p.h_lo, z);
    const double dp_hi = pt.d_price(p.h_hi, z), dw_hi = pt.d_wealth(p.h_hi, z);
    const double floor_pv = p.q * pt.disc;

    const double A = w * norm_cdf(dw_lo);
    const double B = floor_pv * (norm_cdf(dp_hi) - norm_cdf(dp_lo));
    const double C = std::pow(1.0 + p.y2, 1.0 / g) * w * norm_cdf(-dw_hi);
    const double F = A + B + C;
    const double theta_rel = 1.0 - B / F;
    return CurveSample{z, stock_or_nan(mkt, t, z), F,
                       theta_normal(mkt, g) * theta_rel, theta_rel};
}

CurveSample wealth_and_fraction(const TerminalProfile& p, const MarketParams& mkt, double T,
                                double t, double z, const QuadratureConfig& cfg) {
    switch (p.kind) {
        case ConstraintKind::Unconstrained: {
            const PreHorizonTerms pt = PreHorizonTerms::make(mkt, p.gamma, T, t);
            const auto& pw = std::get<PowerPiece>(p.branches.front().piece);
            const double F = power_conditional_price(pt, pw.coef, pw.expo, z);
            return CurveSample{z, stock_or_nan(mkt, t, z), F, theta_normal(mkt, p.gamma), 1.0};
        }
        case ConstraintKind::VaR:
            return wealth_and_fraction_var(p, mkt, T, t, z);
        case ConstraintKind::EL:
            return wealth_and_fraction_el(p, mkt, T, t, z, cfg);
        case ConstraintKind::EUL:
            return wealth_and_fraction_eul(p, mkt, T, t, z);
        case ConstraintKind::PureBond: {
            check_time(T, t);
            const auto& fl = std::get<FloorPiece>(p.branches.front().piece);
            const double F = fl.level * std::exp(-mkt.r * (T - t));
            return CurveSample{z, stock_or_nan(mkt, t, z), F, 0.0, 0.0};
        }
        case ConstraintKind::PureStock: {
            const PreHorizonTerms pt = PreHorizonTerms::make(mkt, p.gamma, T, t);
            const auto& pw = std::get<PowerPiece>(p.branches.front().piece);
            const double F = power_conditional_price(pt, pw.coef, pw.expo, z);
            // Theta = -gamma * expo is constant; theta = 1 for expo = -sigma/kappa
            const double frac = -(mkt.kappa / mkt.sigma) * pw.expo;
            const double tn = theta_normal(mkt, p.gamma);
            return CurveSample{z, stock_or_nan(mkt, t, z), F, frac,
                               tn == 0.0 ? kNaN : frac / tn};
        }
    }
    throw std::invalid_argument("wealth_and_fraction: unknown kind");
}

std::vector<CurveSample> curve(const TerminalProfile& p, const MarketParams& mkt, double T,
                               double t, const std::vector<double>& stock_grid,
                               const QuadratureConfig& cfg) {
    if (stock_grid.empty()) throw std::invalid_argument("curve: empty grid");
    check_time(T, t);
    std::vector<CurveSample> out;
    out.reserve(stock_grid.size());
    double prev = 0.0;
    for (double s : stock_grid) {
        if (!(s > prev))
            throw std::invalid_argument("curve: grid must be strictly positive and increasing");
        prev = s;
        const double z = h_from_stock(mkt, t, s);
        CurveSample cs = wealth_and_fraction(p, mkt, T, t, z, cfg);
        cs.s = s;
        out.push_back(cs);
    }
    return out;
}

} // namespace riskopt
