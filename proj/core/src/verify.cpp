#include "riskopt/verify.hpp"

#include <cmath>
#include <limits>

#include "riskopt/density.hpp"
#include "riskopt/prehorizon.hpp"
#include "riskopt/solver.hpp"

namespace riskopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rebuilds the profile's branch map after scaling the first multiplier; used
// only by the perturbation hook.
TerminalProfile scaled_multiplier(const TerminalProfile& p, const UtilitySpec& util,
                                  double factor) {
    if (factor == 1.0) return p;
    TerminalProfile out = p;
    out.y = p.y * factor;
    const double g = p.gamma;
    const double coef = std::pow(out.y, -1.0 / g);
    switch (p.kind) {
        case ConstraintKind::PureBond:
        case ConstraintKind::PureStock:
            return out;
        case ConstraintKind::Unconstrained:
            out.branches = {Branch{0.0, kInf, PowerPiece{coef, -1.0 / g}}};
            out.h_lo = out.h_hi = p.q > 0.0 ? util.u_prime(p.q) / out.y : 1.0;
            return out;
        default: break;
    }
    if (!p.binding()) {
        out.branches = {Branch{0.0, kInf, PowerPiece{coef, -1.0 / g}}};
        out.h_lo = out.h_hi = util.u_prime(p.q) / out.y;
        return out;
    }
    out.h_lo = util.u_prime(p.q) / out.y;
    switch (p.kind) {
        case ConstraintKind::VaR: // h_hi is the preference-free quantile
            out.branches = {Branch{0.0, out.h_lo, PowerPiece{coef, -1.0 / g}},
                            Branch{out.h_lo, out.h_hi, FloorPiece{p.q}},
                            Branch{out.h_hi, kInf, PowerPiece{coef, -1.0 / g}}};
            if (std::isinf(p.h_hi)) out.branches.pop_back();
            return out;
        case ConstraintKind::EL:
            out.h_hi = (util.u_prime(p.q) + p.y2) / out.y;
            out.branches = {Branch{0.0, out.h_lo, PowerPiece{coef, -1.0 / g}},
                            Branch{out.h_lo, out.h_hi, FloorPiece{p.q}},
                            Branch{out.h_hi, kInf, ShiftedPiece{out.y, p.y2, g}}};
            return out;
        case ConstraintKind::EUL: {
            out.h_hi = (1.0 + p.y2) * out.h_lo;
            const double coef_bad = std::pow((1.0 + p.y2) / out.y, 1.0 / g);
            out.branches = {Branch{0.0, out.h_lo, PowerPiece{coef, -1.0 / g}},
                            Branch{out.h_lo, out.h_hi, FloorPiece{p.q}},
                            Branch{out.h_hi, kInf, PowerPiece{coef_bad, -1.0 / g}}};
            return out;
        }
        default: return out;
    }
}

} // namespace

VerifyReport run_verification(const ScenarioConfig& cfg, double perturb_y) {
    VerifyReport rep;
    const MarketParams mkt = cfg.market();
    const UtilitySpec util = cfg.utility();
    const double T = cfg.T, x = cfg.x, t = cfg.t;
    const QuadratureConfig qcfg;

    TerminalProfile p = solve(mkt, T, x, util, cfg.constraint(), qcfg);
    p = scaled_multiplier(p, util, perturb_y);
    const MCConfig mc_cfg = cfg.mc();

    const bool constrained = p.kind == ConstraintKind::VaR ||
                             p.kind == ConstraintKind::EL || p.kind == ConstraintKind::EUL;

    // --- static functionals vs Monte Carlo, 3 SE gate -------------------
    std::vector<Functional> fns{Functional::budget(), Functional::mean()};
    const double q = cfg.resolved_q();
    fns.push_back(Functional::interval(0.0, 0.75 * q));
    fns.push_back(Functional::interval(0.5 * q, 2.0 * q));
    if (constrained) fns.push_back(Functional::constraint());

    std::vector<double> closed{
        budget_value(p, mkt, T, qcfg),
        expected_terminal_wealth(p, mkt, T, qcfg),
        interval_probability(p, mkt, T, 0.0, 0.75 * q),
        interval_probability(p, mkt, T, 0.5 * q, 2.0 * q),
    };
    if (constrained) closed.push_back(constraint_value(p, mkt, T, qcfg));

    std::vector<std::string> labels{"budget", "mean", "interval(0,0.75q)",
                                    "interval(0.5q,2q)"};
    if (constrained) labels.push_back("constraint");

    const std::vector<MCReport> mc = mc_static(p, mkt, T, fns, mc_cfg);
    for (std::size_t i = 0; i < fns.size(); ++i) {
        MCReport r = mc[i];
        r.against(closed[i]);
        VerifyRow row;
        row.name = labels[i];
        row.closed = closed[i];
        row.estimate = r.estimate;
        row.std_error = r.std_error;
        row.z = r.z_score;
        // degenerate functionals (e.g. pure bond) have zero SE; require equality
        row.pass = r.std_error > 0.0 ? std::abs(r.z_score) <= 3.0
                                     : std::abs(r.estimate - closed[i]) <=
                                           1e-12 * (1.0 + std::abs(closed[i]));
        rep.rows.push_back(row);
    }

    // --- budget must equal initial wealth (solver invariant) ------------
    {
        VerifyRow row;
        row.name = "budget = x";
        row.closed = x;
        row.estimate = closed[0];
        row.std_error = 0.0;
        row.z = 0.0;
        row.pass = std::abs(closed[0] - x) <= 1e-8 * x;
        rep.rows.push_back(row);
    }

    // --- F(z,t) vs conditional MC at spot pins --------------------------
    const LognormalLaw law_t = state_price_law(mkt, t > 0.0 ? t : 0.5 * T);
    const double t_pin = t > 0.0 ? t : 0.5 * T;
    const std::vector<double> z_pins{law_t.quantile(0.15), law_t.quantile(0.4),
                                     law_t.quantile(0.6), law_t.quantile(0.85), 1.0};
    MCConfig cond_cfg = mc_cfg;
    cond_cfg.n_samples = std::min<std::int64_t>(mc_cfg.n_samples, 1'000'000);
    for (double z : z_pins) {
        const CurveSample cs = wealth_and_fraction(p, mkt, T, t_pin, z, qcfg);
        MCReport r = mc_conditional_wealth(p, mkt, T, t_pin, z, cond_cfg);
        r.against(cs.wealth);
        VerifyRow row;
        row.name = "F(z=" + std::to_string(z).substr(0, 6) + ",t)";
        row.closed = cs.wealth;
        row.estimate = r.estimate;
        row.std_error = r.std_error;
        row.z = r.z_score;
        row.pass = r.std_error > 0.0 ? std::abs(r.z_score) <= 3.0 : true;
        rep.rows.push_back(row);
    }

    // --- delta identity: fraction vs -(kappa/sigma) z dF/dz / F ---------
    if (p.kind != ConstraintKind::PureBond) {
        for (double z : {z_pins[0], z_pins[2], z_pins[3]}) {
            const CurveSample cs = wealth_and_fraction(p, mkt, T, t_pin, z, qcfg);
            const double dz = 1e-5 * z;
            const double f_up =
                wealth_and_fraction(p, mkt, T, t_pin, z + dz, qcfg).wealth;
            const double f_dn =
                wealth_and_fraction(p, mkt, T, t_pin, z - dz, qcfg).wealth;
            const double fd_frac =
                -(mkt.kappa / mkt.sigma) * z * (f_up - f_dn) / (2.0 * dz) / cs.wealth;
            VerifyRow row;
            row.name = "delta(z=" + std::to_string(z).substr(0, 6) + ")";
            row.closed = cs.fraction;
            row.estimate = fd_frac;
            row.std_error = 0.0;
            row.z = 0.0;
            const double scale = std::max(std::abs(cs.fraction), 1e-6);
            row.pass = std::abs(fd_frac - cs.fraction) <= 1e-4 * scale;
            rep.rows.push_back(row);
        }
    }

    return rep;
}

} // namespace riskopt
