// Acceptance suite: one pass/fail line per criterion check, nonzero exit if
// any check fails. Checks marked "reference-inconsistent" compare against
// figures from the published example that contradict its own arithmetic
// (verified independently by quadrature and Monte Carlo); they are asserted
// as stated on purpose and report the computed truth next to the reference.

#include <chrono>
#include <random>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "riskopt/density.hpp"
#include "riskopt/mc.hpp"
#include "riskopt/prehorizon.hpp"
#include "riskopt/scenario.hpp"
#include "riskopt/solver.hpp"
#include "riskopt/verify.hpp"

using namespace riskopt;

namespace {

int checks_run = 0;
int checks_failed = 0;

void check(int crit, bool ok, const std::string& what, const std::string& detail = "") {
    ++checks_run;
    if (!ok) ++checks_failed;
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", crit, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
}

std::string num2(double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "computed %.6f vs required %.6f", a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    const MarketParams mkt = MarketParams::make(0.09, 0.20, 0.06);
    const UtilitySpec log_u = UtilitySpec::make(1.0);
    const double T = 15.0, x0 = 1.0;
    const double q = 0.75 * x0 * std::exp(mkt.r * T);
    const double eps = 0.06;
    const QuadratureConfig qcfg;

    // ---- criterion 1: scenario constants, closed form, < 1 s ----------
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double bond_mean =
            expected_terminal_wealth(pure_bond_profile(mkt, T, x0), mkt, T);
        const double stock_mean =
            expected_terminal_wealth(pure_stock_profile(mkt, T, x0), mkt, T);
        const double unc_mean =
            expected_terminal_wealth(solve_unconstrained(mkt, T, x0, log_u), mkt, T);
        const double elapsed = seconds_since(t0);
        check(1, std::abs(q - 1.8447) <= 5e-5, "q = 0.75 x e^{rT} = 1.8447 +- 5e-5",
              num2(q, 1.8447));
        check(1, std::abs(bond_mean - 2.4596) <= 5e-5, "pure-bond mean 2.4596 +- 5e-5",
              num2(bond_mean, 2.4596));
        check(1, std::abs(stock_mean - 3.8574) <= 5e-5, "pure-stock mean 3.8574 +- 5e-5",
              num2(stock_mean, 3.8574));
        check(1, std::abs(unc_mean - 3.4469) <= 1e-3, "unconstrained mean 3.4469 +- 1e-3",
              num2(unc_mean, 3.4469));
        check(1, elapsed < 1.0, "closed-form constants run in < 1 s");
    }

    // ---- criterion 2: VaR solution -------------------------------------
    const TerminalProfile var = solve_var(mkt, T, x0, log_u, q, eps);
    const TerminalProfile unc = solve_unconstrained(mkt, T, x0, log_u);
    {
        const LognormalLaw law = state_price_law(mkt, T);
        const double tail = 1.0 - law.cdf(var.h_hi);
        check(2, std::abs(tail - eps) <= 1e-10, "P(H_T > h_bar) = 0.06 to 1e-10",
              num2(tail, eps));
        const double q2 = var.q2();
        check(2, std::abs(q2 - 1.1765) <= 0.005 * 1.1765, "q2 = 1.1765 within 0.5%",
              num2(q2, 1.1765) + " (reference-inconsistent: budget at the reference "
                                 "q2 misses x by ~3%)");
        const DensitySummary dens =
            terminal_density(var, mkt, T, default_wealth_grid(var, mkt, T));
        check(2, dens.gap && dens.gap->first == q2 && dens.gap->second == q,
              "density gap is exactly (q2, q)");
        const double p_var = interval_probability(var, mkt, T, 0.0, 1.0807);
        check(2, std::abs(p_var - 0.0600) <= 5e-4,
              "P(xi_VaR in (0,1.0807)) = 6.00% +- 0.05pp",
              num2(p_var, 0.06) + " (reference-inconsistent: 6% is the mass below q2, "
                                  "and 1.0807 < q2 fails for the reference q2 too)");
        const double p_unc = interval_probability(unc, mkt, T, 0.0, 1.0807);
        check(2, std::abs(p_unc - 0.0456) <= 5e-4,
              "P(xi_unc in (0,1.0807)) = 4.56% +- 0.05pp",
              num2(p_unc, 0.0456) + " (reference-inconsistent: preference-free "
                                    "lognormal tail, MC-confirmed)");
    }

    // ---- criterion 3: EL and EUL ---------------------------------------
    const TerminalProfile el = solve_el(mkt, T, x0, log_u, q, eps, qcfg);
    const TerminalProfile eul = solve_eul(mkt, T, x0, log_u, q, eps);
    {
        const double p_el = interval_probability(el, mkt, T, 0.0, 1.0807);
        check(3, std::abs(p_el - 0.0114) <= 5e-4,
              "P(xi_EL in (0,1.0807)) = 1.14% +- 0.05pp",
              num2(p_el, 0.0114) + " (reference-inconsistent; MC-confirmed)");
        const double p_eul = interval_probability(eul, mkt, T, 0.0, 1.0807);
        check(3, std::abs(p_eul - 0.0393) <= 5e-4,
              "P(xi_EUL in (0,1.0807)) = 3.93% +- 0.05pp",
              num2(p_eul, 0.0393) + " (reference-inconsistent; MC-confirmed)");
        for (const auto& [name, p] : {std::pair{"EL", &el}, {"EUL", &eul}}) {
            const double br = std::abs(budget_value(*p, mkt, T, qcfg) - x0);
            const double cr = std::abs(constraint_value(*p, mkt, T, qcfg) - eps);
            check(3, br < 1e-8, std::string(name) + " budget residual < 1e-8",
                  num2(br, 1e-8));
            check(3, cr < 1e-8, std::string(name) + " constraint residual < 1e-8",
                  num2(cr, 1e-8));
        }
    }

    // ---- criterion 4: strategy curves at t = 5 --------------------------
    {
        const double t = 5.0;
        bool var_exceeds = false;
        for (double s = 0.02; s < 0.9282; s += 0.01)
            if (wealth_and_fraction_var(var, mkt, T, t, h_from_stock(mkt, t, s)).fraction >
                0.75)
                var_exceeds = true;
        check(4, var_exceeds, "VaR fraction exceeds 0.75 somewhere in S in (0, 0.9282)");

        double worst_el = 0.0;
        for (double s = 2.1373; s < 12.0; s *= 1.1) {
            const double f =
                wealth_and_fraction_el(el, mkt, T, t, h_from_stock(mkt, t, s), qcfg)
                    .fraction;
            worst_el = std::max(worst_el, std::abs(f));
        }
        check(4, worst_el <= 1e-3, "EL fraction within 1e-3 of 0 for S > 2.1373",
              num2(worst_el, 1e-3) +
                  " (reference-inconsistent: the EL optimum tends to the normal "
                  "strategy 0.75 in the cheap-consumption region; the reference's "
                  "all-in-bond claim contradicts its own wealth formula, which is "
                  "strictly decreasing in H)");

        bool eul_in_band = true;
        for (double s = 0.05; s < 12.0; s *= 1.05) {
            const double f =
                wealth_and_fraction_eul(eul, mkt, T, t, h_from_stock(mkt, t, s)).fraction;
            if (!(f > 0.0 && f <= 0.75)) eul_in_band = false;
        }
        check(4, eul_in_band, "EUL fraction lies in (0, 0.75] on the whole grid");

        const double tt = T - 1e-8;
        const bool limit_ok =
            std::abs(wealth_and_fraction_eul(eul, mkt, T, tt, 0.5 * eul.h_lo)
                         .relative_exposure - 1.0) <= 1e-3 &&
            std::abs(wealth_and_fraction_eul(eul, mkt, T, tt, 2.0 * eul.h_hi)
                         .relative_exposure - 1.0) <= 1e-3 &&
            std::abs(wealth_and_fraction_eul(eul, mkt, T, tt,
                                             0.5 * (eul.h_lo + eul.h_hi))
                         .relative_exposure) <= 1e-3 &&
            std::abs(wealth_and_fraction_eul(eul, mkt, T, tt, eul.h_lo)
                         .relative_exposure - 0.5) <= 1e-3 &&
            std::abs(wealth_and_fraction_eul(eul, mkt, T, tt, eul.h_hi)
                         .relative_exposure - 0.5) <= 1e-3;
        check(4, limit_ok, "EUL exposure t->T limit pattern (1 / 0 / 1/2) at T - 1e-8");
    }

    // ---- criterion 5: loss-measure dominance ----------------------------
    {
        const LossReport lv = loss_measures(var, var, mkt, T, qcfg);
        const LossReport lu = loss_measures(unc, var, mkt, T, qcfg);
        check(5, lv.l1 >= lu.l1 && lv.l2 >= lu.l2,
              "L1/L2 of the VaR optimum dominate the benchmark on the reference scenario");
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int tested = 0, holds = 0;
        while (tested < 20) {
            const double rr = 0.01 + 0.05 * u(rng);
            const double mm = rr + 0.01 + 0.09 * u(rng);
            const double ss = 0.1 + 0.3 * u(rng);
            const double TT = 2.0 + 16.0 * u(rng);
            const double gg = 0.6 + 2.4 * u(rng);
            const double qq = (0.5 + 0.4 * u(rng)) * std::exp(rr * TT);
            const double ee = 0.02 + 0.2 * u(rng);
            const MarketParams m2 = MarketParams::make(mm, ss, rr);
            const UtilitySpec u2 = UtilitySpec::make(gg);
            TerminalProfile v2;
            try {
                v2 = solve_var(m2, TT, 1.0, u2, qq, ee);
            } catch (const std::exception&) {
                continue;
            }
            if (!v2.binding()) continue;
            ++tested;
            const TerminalProfile un2 = solve_unconstrained(m2, TT, 1.0, u2);
            const LossReport a = loss_measures(v2, v2, m2, TT, qcfg);
            const LossReport b = loss_measures(un2, v2, m2, TT, qcfg);
            if (a.l1 >= b.l1 - 1e-12 && a.l2 >= b.l2 - 1e-12) ++holds;
        }
        check(5, holds == 20, "dominance holds on 20 randomized binding scenarios",
              std::to_string(holds) + "/20");
    }

    // ---- criterion 6: oracle agreement, < 60 s ---------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        const char* kinds[] = {"unconstrained", "var", "el", "eul", "bond", "stock"};
        bool all_ok = true;
        std::string failing;
        for (const char* kind : kinds) {
            ScenarioConfig cfg;
            cfg.kind = constraint_kind_from_string(kind);
            cfg.mc_samples = 10'000'000;
            cfg.seed = 20240601;
            const VerifyReport rep = run_verification(cfg, 1.0);
            for (const VerifyRow& row : rep.rows)
                if (!row.pass) {
                    all_ok = false;
                    failing += std::string(kind) + "/" + row.name + " ";
                }
        }
        const double elapsed = seconds_since(t0);
        check(6, all_ok,
              "budget/constraint/mean/intervals vs MC(1e7), F vs conditional MC(1e6), "
              "delta identity 1e-4, all kinds",
              failing.empty() ? "" : "failing: " + failing);
        check(6, elapsed < 60.0, "oracle suite runs in < 60 s",
              num2(elapsed, 60.0));
    }

    // ---- criterion 7: dynamic replication -------------------------------
    {
        // thresholds fixed by the pre-build convergence study (RMS at 512
        // steps, 1e4 paths: benchmark 0.0036, VaR 0.024, EL ~0.005, EUL 0.0045)
        struct Row {
            const char* kind;
            const TerminalProfile* p;
            double threshold;
            bool exact;
        };
        const TerminalProfile bond = pure_bond_profile(mkt, T, x0);
        const TerminalProfile stock = pure_stock_profile(mkt, T, x0);
        const Row rows[] = {
            {"bond", &bond, 1e-10, true},   {"stock", &stock, 1e-10, true},
            {"unconstrained", &unc, 0.006, false}, {"var", &var, 0.040, false},
            {"el", &el, 0.015, false},      {"eul", &eul, 0.008, false},
        };
        const QuadratureConfig fast{1e-7, 1e-7, 2000};
        for (const Row& row : rows) {
            MCConfig cfg;
            cfg.n_samples = 10000;
            cfg.n_steps = 512;
            cfg.seed = 424242;
            const double rms512 = replicate(*row.p, mkt, T, cfg, fast).estimate;
            check(7, rms512 < row.threshold,
                  std::string("replication RMS(512 steps) below study threshold, ") +
                      row.kind,
                  num2(rms512, row.threshold));
            if (row.exact) continue;
            cfg.n_steps = 128;
            const double rms128 = replicate(*row.p, mkt, T, cfg, fast).estimate;
            const double ratio = rms128 / rms512;
            const bool halves = ratio >= 1.6 && ratio <= 2.4;
            std::string note = num2(ratio, 2.0);
            if (!halves && std::string(row.kind) == "var")
                note += " (the VaR payoff jump caps the hedging-error decay near "
                        "rate 1/4, so quadrupling steps cannot halve the RMS; "
                        "inherent to the discontinuous payoff, not the solver)";
            check(7, halves,
                  std::string("RMS halves (+-20%) from 128 to 512 steps, ") + row.kind,
                  note);
        }
    }

    // ---- criterion 8: reference means are flagged, oracles must agree ----
    {
        struct Row {
            const char* name;
            const TerminalProfile* p;
            double reference;
        };
        const Row rows[] = {{"VaR", &var, 8.7437}, {"EL", &el, 2.3495},
                            {"EUL", &eul, 8.8482}};
        MCConfig cfg;
        cfg.n_samples = 10'000'000;
        cfg.seed = 77;
        for (const Row& row : rows) {
            const double closed = expected_terminal_wealth(*row.p, mkt, T, qcfg);
            MCReport rep = mc_static(*row.p, mkt, T, Functional::mean(), cfg);
            rep.against(closed);
            char detail[160];
            std::snprintf(detail, sizeof detail,
                          "closed %.4f vs MC %.4f (z = %.2f); reference %.4f printed "
                          "and flagged, not targeted",
                          closed, rep.estimate, rep.z_score, row.reference);
            check(8, std::abs(rep.z_score) <= 3.0,
                  std::string("E[xi_") + row.name + "] oracle self-consistency (3 SE)",
                  detail);
        }
    }

    std::printf("\n%d checks, %d failed\n", checks_run, checks_failed);
    if (checks_failed > 0)
        std::printf("every failure above is annotated; see README.md for the "
                    "reference-inconsistency analysis\n");
    return checks_failed == 0 ? 0 : 1;
}
