#include "riskopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "riskopt/errors.hpp"
#include "riskopt/rootfind.hpp"

namespace riskopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Branch> power_everywhere(double coef, double expo) {
    return {Branch{0.0, kInf, PowerPiece{coef, expo}}};
}

// xi(h) = I(y h) outside [h_lo, h_hi), q inside; the VaR / insurer shape.
std::vector<Branch> capped_branches(double y, double gamma, double q, double h_lo,
                                    double h_hi) {
    const double coef = std::pow(y, -1.0 / gamma);
    const double expo = -1.0 / gamma;
    std::vector<Branch> out;
    out.push_back(Branch{0.0, h_lo, PowerPiece{coef, expo}});
    out.push_back(Branch{h_lo, h_hi, FloorPiece{q}});
    if (!std::isinf(h_hi)) out.push_back(Branch{h_hi, kInf, PowerPiece{coef, expo}});
    return out;
}

TerminalProfile unconstrained_shape(ConstraintKind kind, double y, double gamma, double q) {
    TerminalProfile p;
    p.kind = kind;
    p.y = y;
    p.y2 = 0.0;
    p.gamma = gamma;
    p.q = q;
    const double pin = q > 0.0 ? UtilitySpec{gamma}.u_prime(q) / y : 1.0;
    p.h_lo = p.h_hi = pin;
    p.branches = power_everywhere(std::pow(y, -1.0 / gamma), -1.0 / gamma);
    return p;
}

// Portfolio insurer: xi = max(I(y h), q); eps = 0 case of VaR/EL/EUL.
TerminalProfile solve_insurer(const MarketParams& mkt, double T, double x,
                              const UtilitySpec& util, double q, ConstraintKind kind) {
    const LognormalLaw law = state_price_law(mkt, T);
    const double floor_cost = q * law.mean();
    if (x <= floor_cost) {
        std::ostringstream os;
        os << "portfolio insurance infeasible: floor cost q e^{-rT} = " << floor_cost
           << " >= initial wealth " << x;
        throw infeasible_error(os.str());
    }
    const double gamma = util.gamma;
    auto budget = [&](double y) {
        const double h_lo = util.u_prime(q) / y;
        return std::pow(y, -1.0 / gamma) *
                   partial_power_expectation(law, 1.0 - 1.0 / gamma, 0.0, h_lo) +
               q * partial_power_expectation(law, 1.0, h_lo, kInf) - x;
    };
    const RootResult res = solve_monotone(budget, 0.5 / x, 2.0 / x, "insurer budget");
    TerminalProfile p;
    p.kind = kind;
    p.y = res.x;
    p.gamma = gamma;
    p.q = q;
    p.h_lo = util.u_prime(q) / res.x;
    p.h_hi = kInf;
    p.branches = capped_branches(res.x, gamma, q, p.h_lo, kInf);
    return p;
}

struct SubInterval {
    double lo, hi;
    bool empty() const { return !(lo < hi); }
};

// Part of [b.lo, b.hi) where xi(h) < w (xi nonincreasing on every piece).
SubInterval region_below(const Branch& b, double w) {
    const double cut = branch_h_where_below(b, w);
    return SubInterval{cut, b.hi};
}

} // namespace

const char* to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::Unconstrained: return "unconstrained";
        case ConstraintKind::VaR: return "var";
        case ConstraintKind::EL: return "el";
        case ConstraintKind::EUL: return "eul";
        case ConstraintKind::PureBond: return "bond";
        case ConstraintKind::PureStock: return "stock";
    }
    return "?";
}

ConstraintKind constraint_kind_from_string(const std::string& name) {
    if (name == "unconstrained" || name == "none") return ConstraintKind::Unconstrained;
    if (name == "var") return ConstraintKind::VaR;
    if (name == "el") return ConstraintKind::EL;
    if (name == "eul") return ConstraintKind::EUL;
    if (name == "bond" || name == "pure-bond") return ConstraintKind::PureBond;
    if (name == "stock" || name == "pure-stock") return ConstraintKind::PureStock;
    throw std::invalid_argument("unknown constraint kind: " + name);
}

double branch_h_where_below(const Branch& b, double w) {
    double cut = b.hi;
    if (const auto* p = std::get_if<PowerPiece>(&b.piece)) {
        // coef h^expo < w  <=>  h > (w/coef)^{1/expo} for expo < 0
        if (p->expo == 0.0) {
            cut = p->coef < w ? b.lo : b.hi;
        } else {
            cut = std::pow(w / p->coef, 1.0 / p->expo);
        }
    } else if (const auto* f = std::get_if<FloorPiece>(&b.piece)) {
        cut = f->level < w ? b.lo : b.hi;
    } else {
        const auto& s = std::get<ShiftedPiece>(b.piece);
        // (y1 h - y2)^{-1/g} < w  <=>  h > (w^{-g} + y2)/y1
        cut = (std::pow(w, -s.gamma) + s.y2) / s.y1;
    }
    return std::clamp(cut, b.lo, b.hi);
}

double branch_expectation(const Branch& b, const LognormalLaw& law, double sub_lo,
                          double sub_hi, int xi_power, bool weight_h,
                          const QuadratureConfig& cfg) {
    const double lo = std::max(sub_lo, b.lo);
    const double hi = std::min(sub_hi, b.hi);
    if (!(lo < hi)) return 0.0;
    const double hw = weight_h ? 1.0 : 0.0;

    if (const auto* p = std::get_if<PowerPiece>(&b.piece)) {
        const double c = xi_power == 0 ? 1.0 : p->coef; // xi_power in {0,1}
        const double e = xi_power == 0 ? 0.0 : p->expo;
        return c * partial_power_expectation(law, e + hw, lo, hi);
    }
    if (const auto* f = std::get_if<FloorPiece>(&b.piece)) {
        const double c = xi_power == 0 ? 1.0 : f->level;
        return c * partial_power_expectation(law, hw, lo, hi);
    }
    const auto& sp = std::get<ShiftedPiece>(b.piece);
    const double m = law.m, s = law.s;
    const double vlo = lo == 0.0 ? -kInf : (std::log(lo) - m) / s;
    const double vhi = std::isinf(hi) ? kInf : (std::log(hi) - m) / s;
    auto f = [&](double v) {
        const double h = std::exp(m + s * v);
        const double base = sp.y1 * h - sp.y2;
        double val = xi_power == 0 ? 1.0
                     : sp.gamma == 1.0 ? 1.0 / base
                                       : std::pow(base, -1.0 / sp.gamma);
        if (weight_h) val *= h;
        return val;
    };
    return integrate_gaussian(f, vlo, vhi, cfg);
}

double budget_value(const TerminalProfile& p, const MarketParams& mkt, double T,
                    const QuadratureConfig& cfg) {
    const LognormalLaw law = state_price_law(mkt, T);
    double acc = 0.0;
    for (const Branch& b : p.branches)
        acc += branch_expectation(b, law, 0.0, kInf, 1, true, cfg);
    return acc;
}

double shortfall_functional(const TerminalProfile& p, const MarketParams& mkt, double T,
                            ConstraintKind kind, double q, const QuadratureConfig& cfg) {
    const LognormalLaw law = state_price_law(mkt, T);
    const UtilitySpec util{p.gamma};
    double acc = 0.0;
    for (const Branch& b : p.branches) {
        const SubInterval r = region_below(b, q);
        if (r.empty()) continue;
        switch (kind) {
            case ConstraintKind::VaR:
                acc += partial_power_expectation(law, 0.0, r.lo, r.hi);
                break;
            case ConstraintKind::EL:
                acc += q * branch_expectation(b, law, r.lo, r.hi, 0, false, cfg) -
                       branch_expectation(b, law, r.lo, r.hi, 1, false, cfg);
                break;
            case ConstraintKind::EUL: {
                const double uq = util.u(q);
                const double prob = partial_power_expectation(law, 0.0, r.lo, r.hi);
                // E[u(xi); region] branch by branch
                double eu = 0.0;
                if (const auto* pw = std::get_if<PowerPiece>(&b.piece)) {
                    if (p.gamma == 1.0) {
                        eu = std::log(pw->coef) * prob +
                             pw->expo * partial_log_expectation(law, r.lo, r.hi);
                    } else {
                        const double g = 1.0 - p.gamma;
                        eu = std::pow(pw->coef, g) / g *
                             partial_power_expectation(law, pw->expo * g, r.lo, r.hi);
                    }
                } else if (const auto* fl = std::get_if<FloorPiece>(&b.piece)) {
                    eu = util.u(fl->level) * prob;
                } else {
                    const auto& sp = std::get<ShiftedPiece>(b.piece);
                    const double m = law.m, s = law.s;
                    const double vlo = r.lo == 0.0 ? -kInf : (std::log(r.lo) - m) / s;
                    const double vhi = std::isinf(r.hi) ? kInf : (std::log(r.hi) - m) / s;
                    eu = integrate_gaussian(
                        [&](double v) {
                            const double h = std::exp(m + s * v);
                            return util.u(util.inverse_marginal(sp.y1 * h - sp.y2));
                        },
                        vlo, vhi, cfg);
                }
                acc += uq * prob - eu;
                break;
            }
            default:
                throw std::invalid_argument("shortfall_functional: kind must be VaR, EL or EUL");
        }
    }
    return acc;
}

double constraint_value(const TerminalProfile& p, const MarketParams& mkt, double T,
                        const QuadratureConfig& cfg) {
    if (p.kind != ConstraintKind::VaR && p.kind != ConstraintKind::EL &&
        p.kind != ConstraintKind::EUL)
        throw std::invalid_argument("constraint_value: profile carries no risk constraint");
    return shortfall_functional(p, mkt, T, p.kind, p.q, cfg);
}

double eps_max(const MarketParams& mkt, double T, double x, const UtilitySpec& util,
               double q, ConstraintKind kind, const QuadratureConfig& cfg) {
    if (kind != ConstraintKind::EL && kind != ConstraintKind::EUL)
        throw std::invalid_argument("eps_max: defined for EL and EUL only");
    const TerminalProfile unc = solve_unconstrained(mkt, T, x, util);
    return shortfall_functional(unc, mkt, T, kind, q, cfg);
}

LossReport loss_measures(const TerminalProfile& p, const TerminalProfile& benchmark,
                         const MarketParams& mkt, double T, const QuadratureConfig& cfg) {
    const TerminalProfile* var_side = nullptr;
    if (p.kind == ConstraintKind::VaR)
        var_side = &p;
    else if (benchmark.kind == ConstraintKind::VaR)
        var_side = &benchmark;
    else
        throw std::invalid_argument("loss_measures: q2 requires a VaR profile on one side");
    const double q2 = var_side->q2();

    const LognormalLaw law = state_price_law(mkt, T);
    double l1 = 0.0, l2 = 0.0;
    for (const Branch& b : p.branches) {
        // indicator {xi <= q2}: treat as the closure of {xi < q2}; the
        // boundary point carries no probability on continuous pieces
        SubInterval r = region_below(b, q2);
        if (const auto* fl = std::get_if<FloorPiece>(&b.piece))
            if (fl->level == q2) r = SubInterval{b.lo, b.hi};
        if (r.empty()) continue;
        l1 += q2 * branch_expectation(b, law, r.lo, r.hi, 0, false, cfg) -
              branch_expectation(b, law, r.lo, r.hi, 1, false, cfg);
        l2 += q2 * branch_expectation(b, law, r.lo, r.hi, 0, true, cfg) -
              branch_expectation(b, law, r.lo, r.hi, 1, true, cfg);
    }
    return LossReport{l1, l2, q2};
}

TerminalProfile solve_unconstrained(const MarketParams& mkt, double T, double x,
                                    const UtilitySpec& util) {
    if (!(x > 0.0)) throw std::invalid_argument("solve_unconstrained: x must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("solve_unconstrained: T must be > 0");
    const double gamma = util.gamma;
    double y;
    if (util.log_case()) {
        y = 1.0 / x; // E[H I(yH)] = 1/y exactly
    } else {
        const LognormalLaw law = state_price_law(mkt, T);
        auto budget = [&](double yy) {
            return std::pow(yy, -1.0 / gamma) *
                       partial_power_expectation(law, 1.0 - 1.0 / gamma, 0.0, kInf) -
                   x;
        };
        const double y0 = std::pow(
            partial_power_expectation(law, 1.0 - 1.0 / gamma, 0.0, kInf) / x, gamma);
        const RootResult res = solve_monotone(budget, 0.5 * y0, 2.0 * y0,
                                              "unconstrained budget");
        y = res.x;
    }
    return unconstrained_shape(ConstraintKind::Unconstrained, y, gamma, 0.0);
}

TerminalProfile solve_var(const MarketParams& mkt, double T, double x,
                          const UtilitySpec& util, double q, double eps) {
    if (!(x > 0.0) || !(T > 0.0))
        throw std::invalid_argument("solve_var: requires x > 0 and T > 0");
    ConstraintSpec{ConstraintKind::VaR, q, eps}.validate();
    if (eps == 0.0) return solve_insurer(mkt, T, x, util, q, ConstraintKind::VaR);

    const LognormalLaw law = state_price_law(mkt, T);
    const double gamma = util.gamma;
    const double uq = util.u_prime(q);

    // benchmark investor: eps = 1 never constrains
    const TerminalProfile unc = solve_unconstrained(mkt, T, x, util);
    if (eps >= 1.0) {
        TerminalProfile p = unconstrained_shape(ConstraintKind::VaR, unc.y, gamma, q);
        return p;
    }

    // hbar is preference-free: P(H_T > hbar) = eps
    const double h_hi = law.quantile(1.0 - eps);
    if (uq / unc.y >= h_hi) {
        // slack: the unconstrained optimum already satisfies P(xi < q) <= eps
        return unconstrained_shape(ConstraintKind::VaR, unc.y, gamma, q);
    }

    const double cheapest = q * partial_power_expectation(law, 1.0, 0.0, h_hi);
    if (x <= cheapest) {
        std::ostringstream os;
        os << "VaR constraint infeasible: insuring the floor q = " << q
           << " outside the eps tail costs " << cheapest << " >= x = " << x;
        throw infeasible_error(os.str());
    }

    auto budget = [&](double y) {
        const double h_lo = std::min(uq / y, h_hi);
        const double iy = std::pow(y, -1.0 / gamma);
        const double mid =
            h_lo < h_hi ? q * partial_power_expectation(law, 1.0, h_lo, h_hi) : 0.0;
        return iy * (partial_power_expectation(law, 1.0 - 1.0 / gamma, 0.0, h_lo) +
                     partial_power_expectation(law, 1.0 - 1.0 / gamma, h_hi, kInf)) +
               mid - x;
    };
    const RootResult res = solve_monotone(budget, unc.y, 2.0 * unc.y, "VaR budget");
    const double y = res.x;

    TerminalProfile p;
    p.kind = ConstraintKind::VaR;
    p.y = y;
    p.gamma = gamma;
    p.q = q;
    p.h_lo = uq / y;
    p.h_hi = h_hi;
    if (p.h_lo >= p.h_hi) {
        // boundary case: solved multiplier leaves the constraint exactly slack
        return unconstrained_shape(ConstraintKind::VaR, y, gamma, q);
    }
    p.branches = capped_branches(y, gamma, q, p.h_lo, p.h_hi);
    return p;
}

namespace {

// Shared scaffolding for the EL/EUL two-multiplier systems: for fixed y2 the
// budget is strictly decreasing in y1 (inner solve); the outer residual
// constraint(y2) - eps is then driven to zero by bracketing in y2.
template <typename MakeProfile>
TerminalProfile solve_two_multiplier(const MarketParams& mkt, double T, double x,
                                     const UtilitySpec& util, double q, double eps,
                                     ConstraintKind kind, const QuadratureConfig& cfg,
                                     MakeProfile make_profile) {
    if (!(x > 0.0) || !(T > 0.0))
        throw std::invalid_argument("solver: requires x > 0 and T > 0");
    ConstraintSpec{kind, q, eps}.validate();
    if (eps == 0.0) return solve_insurer(mkt, T, x, util, q, kind);

    const TerminalProfile unc = solve_unconstrained(mkt, T, x, util);
    const double slack_bound = shortfall_functional(unc, mkt, T, kind, q, cfg);
    if (eps >= slack_bound) {
        TerminalProfile p = unconstrained_shape(kind, unc.y, util.gamma, q);
        return p;
    }

    auto inner_y1 = [&](double y2) {
        auto budget = [&](double y1) {
            TerminalProfile p = make_profile(y1, y2);
            return budget_value(p, mkt, T, cfg) - x;
        };
        return solve_monotone(budget, unc.y, 2.0 * unc.y, "budget given y2").x;
    };
    auto outer = [&](double y2) {
        const double y1 = inner_y1(y2);
        TerminalProfile p = make_profile(y1, y2);
        return shortfall_functional(p, mkt, T, kind, q, cfg) - eps;
    };

    // outer(0) = eps_max - eps > 0; expand upward until the residual flips
    double lo = 0.0, flo = slack_bound - eps;
    double hi = 1.0, fhi = outer(hi);
    int guard = 0;
    while (fhi > 0.0 && guard++ < 60) {
        lo = hi;
        flo = fhi;
        hi *= 4.0;
        fhi = outer(hi);
    }
    if (fhi > 0.0)
        throw infeasible_error("EL/EUL solve: constraint bound unreachable within "
                               "searched y2 range (is x below the floor cost?)");
    const RootResult res = find_root(outer, lo, hi, flo, fhi, 1e-12, 1e-11, 200);
    const double y2 = res.x;
    const double y1 = inner_y1(y2);
    return make_profile(y1, y2);
}

} // namespace

TerminalProfile solve_el(const MarketParams& mkt, double T, double x,
                         const UtilitySpec& util, double q, double eps,
                         const QuadratureConfig& cfg) {
    const double gamma = util.gamma;
    const double uq = util.u_prime(q);
    auto make = [&](double y1, double y2) {
        TerminalProfile p;
        p.kind = ConstraintKind::EL;
        p.y = y1;
        p.y2 = y2;
        p.gamma = gamma;
        p.q = q;
        p.h_lo = uq / y1;
        p.h_hi = (uq + y2) / y1;
        const double coef = std::pow(y1, -1.0 / gamma);
        p.branches = {Branch{0.0, p.h_lo, PowerPiece{coef, -1.0 / gamma}},
                      Branch{p.h_lo, p.h_hi, FloorPiece{q}},
                      Branch{p.h_hi, kInf, ShiftedPiece{y1, y2, gamma}}};
        return p;
    };
    return solve_two_multiplier(mkt, T, x, util, q, eps, ConstraintKind::EL, cfg, make);
}

TerminalProfile solve_eul(const MarketParams& mkt, double T, double x,
                          const UtilitySpec& util, double q, double eps) {
    const QuadratureConfig cfg; // EUL functionals are closed form
    const double gamma = util.gamma;
    const double uq = util.u_prime(q);
    auto make = [&](double y1, double y2) {
        TerminalProfile p;
        p.kind = ConstraintKind::EUL;
        p.y = y1;
        p.y2 = y2;
        p.gamma = gamma;
        p.q = q;
        p.h_lo = uq / y1;
        p.h_hi = (1.0 + y2) * p.h_lo;
        const double inv_g = 1.0 / gamma;
        const double coef = std::pow(y1, -inv_g);
        // worst branch: I(y1 h / (1+y2)) = (1+y2)^{1/g} I(y1 h)
        const double coef_bad = std::pow((1.0 + y2) / y1, inv_g);
        p.branches = {Branch{0.0, p.h_lo, PowerPiece{coef, -inv_g}},
                      Branch{p.h_lo, p.h_hi, FloorPiece{q}},
                      Branch{p.h_hi, kInf, PowerPiece{coef_bad, -inv_g}}};
        return p;
    };
    return solve_two_multiplier(mkt, T, x, util, q, eps, ConstraintKind::EUL, cfg, make);
}

TerminalProfile pure_bond_profile(const MarketParams& mkt, double T, double x) {
    if (!(x > 0.0) || !(T > 0.0))
        throw std::invalid_argument("pure_bond_profile: requires x > 0 and T > 0");
    TerminalProfile p;
    p.kind = ConstraintKind::PureBond;
    p.y = 1.0;
    p.gamma = 1.0;
    p.q = 0.0;
    p.h_lo = p.h_hi = 1.0;
    p.branches = {Branch{0.0, kInf, FloorPiece{x * std::exp(mkt.r * T)}}};
    return p;
}

TerminalProfile pure_stock_profile(const MarketParams& mkt, double T, double x) {
    if (!(x > 0.0) || !(T > 0.0))
        throw std::invalid_argument("pure_stock_profile: requires x > 0 and T > 0");
    if (mkt.kappa == 0.0)
        throw std::invalid_argument("pure_stock_profile: terminal stock wealth is not a "
                                    "function of H_T when kappa = 0");
    // S_T = C H_T^{-sigma/kappa} from the shared Brownian driver
    const double k = mkt.kappa;
    const double expo = -mkt.sigma / k;
    const double C = std::exp((mkt.mu - 0.5 * mkt.sigma * mkt.sigma) * T +
                              expo * (mkt.r + 0.5 * k * k) * T);
    TerminalProfile p;
    p.kind = ConstraintKind::PureStock;
    p.y = 1.0;
    p.gamma = 1.0;
    p.q = 0.0;
    p.h_lo = p.h_hi = 1.0;
    p.branches = {Branch{0.0, kInf, PowerPiece{x * C, expo}}};
    return p;
}

TerminalProfile solve(const MarketParams& mkt, double T, double x, const UtilitySpec& util,
                      const ConstraintSpec& spec, const QuadratureConfig& cfg) {
    spec.validate();
    switch (spec.kind) {
        case ConstraintKind::Unconstrained: return solve_unconstrained(mkt, T, x, util);
        case ConstraintKind::VaR: return solve_var(mkt, T, x, util, spec.q, spec.eps);
        case ConstraintKind::EL: return solve_el(mkt, T, x, util, spec.q, spec.eps, cfg);
        case ConstraintKind::EUL: return solve_eul(mkt, T, x, util, spec.q, spec.eps);
        case ConstraintKind::PureBond: return pure_bond_profile(mkt, T, x);
        case ConstraintKind::PureStock: return pure_stock_profile(mkt, T, x);
    }
    throw std::invalid_argument("solve: unknown constraint kind");
}

} // namespace riskopt
