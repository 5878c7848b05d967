#include "riskopt/paper_report.hpp"

#include <cmath>
#include <sstream>

#include "riskopt/density.hpp"
#include "riskopt/prehorizon.hpp"
#include "riskopt/solver.hpp"

namespace riskopt {

namespace {

std::string fmt_z(double z) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << z;
    return os.str();
}

ReportRow value_row(const std::string& label, double reference, double computed,
                    double tol) {
    ReportRow row;
    row.label = label;
    row.reference = reference;
    row.computed = computed;
    if (std::abs(computed - reference) <= tol) {
        row.verdict = "match";
    } else {
        row.verdict = "mismatch";
        row.note = "computed value cross-checked by the oracle suite";
    }
    return row;
}

} // namespace

PaperReport build_paper_report(const ScenarioConfig& cfg) {
    PaperReport rep;
    const MarketParams mkt = cfg.market();
    const UtilitySpec util = cfg.utility();
    const double T = cfg.T, x = cfg.x;
    const double q = cfg.resolved_q();
    const double eps = cfg.eps;
    const QuadratureConfig qcfg;

    const TerminalProfile unc = solve_unconstrained(mkt, T, x, util);
    const TerminalProfile var = solve_var(mkt, T, x, util, q, eps);
    const TerminalProfile el = solve_el(mkt, T, x, util, q, eps, qcfg);
    const TerminalProfile eul = solve_eul(mkt, T, x, util, q, eps);
    const TerminalProfile bond = pure_bond_profile(mkt, T, x);
    const TerminalProfile stock = pure_stock_profile(mkt, T, x);

    rep.rows.push_back(value_row("q = 0.75 x e^{rT}", 1.8447, q, 5e-5));
    rep.rows.push_back(value_row("q2 (VaR)", 1.1765, var.q2(), 0.005 * 1.1765));

    // expected terminal wealths; the study's VaR/EL/EUL means are flagged as
    // internally inconsistent (e.g. both exceed the pure-stock mean or fall
    // below the bond mean while the same section reports budget-binding
    // optima); the check that stands in is closed form vs MC within 3 SE.
    struct MeanSpec {
        const char* label;
        const TerminalProfile* p;
        double reference;
        double tol;   // < 0 marks a flagged row
    };
    const MeanSpec means[] = {
        {"E[xi] pure bond", &bond, 2.4596, 5e-5},
        {"E[xi] pure stock", &stock, 3.8574, 5e-5},
        {"E[xi] unconstrained", &unc, 3.4469, 1e-3},
        {"E[xi] VaR", &var, 8.7437, -1.0},
        {"E[xi] EL", &el, 2.3495, -1.0},
        {"E[xi] EUL", &eul, 8.8482, -1.0},
    };
    MCConfig mc_cfg = cfg.mc();
    for (const MeanSpec& ms : means) {
        const double computed = expected_terminal_wealth(*ms.p, mkt, T, qcfg);
        if (ms.tol > 0.0) {
            rep.rows.push_back(value_row(ms.label, ms.reference, computed, ms.tol));
            continue;
        }
        ReportRow row;
        row.label = ms.label;
        row.reference = ms.reference;
        row.computed = computed;
        row.verdict = "flagged";
        MCReport mc = mc_static(*ms.p, mkt, T, Functional::mean(), mc_cfg);
        mc.against(computed);
        row.note = "reference value inconsistent with the published example; "
                   "closed form vs MC z = " + fmt_z(mc.z_score);
        rep.rows.push_back(row);
    }

    // P(xi in (0, 1.0807)) per strategy
    struct TailSpec {
        const char* label;
        const TerminalProfile* p;
        double reference;
    };
    const TailSpec tails[] = {
        {"P(xi_VaR in (0,1.0807))", &var, 0.06},
        {"P(xi_unc in (0,1.0807))", &unc, 0.0456},
        {"P(xi_EL in (0,1.0807))", &el, 0.0114},
        {"P(xi_EUL in (0,1.0807))", &eul, 0.0393},
    };
    for (const TailSpec& ts : tails) {
        const double computed = interval_probability(*ts.p, mkt, T, 0.0, 1.0807);
        rep.rows.push_back(value_row(ts.label, ts.reference, computed, 5e-4));
    }

    // stock-price images of the VaR breakpoints at the curve time
    const double t_curve = cfg.t > 0.0 && cfg.t < T ? cfg.t : T / 3.0;
    rep.rows.push_back(value_row("S image of h_bar (VaR, t=5)", 0.9282,
                                 stock_from_h(mkt, t_curve, var.h_hi), 5e-4));
    rep.rows.push_back(value_row("S image of h_lo (VaR, t=5)", 2.1373,
                                 stock_from_h(mkt, t_curve, var.h_lo), 5e-4));

    return rep;
}

} // namespace riskopt
