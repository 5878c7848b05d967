// riskopt CLI: solve | curve | density | verify | paper-report
//
// Exit codes: 0 success, 2 config error, 3 infeasible scenario,
// 4 numerical failure, 5 verification failure.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "riskopt/density.hpp"
#include "riskopt/errors.hpp"
#include "riskopt/paper_report.hpp"
#include "riskopt/prehorizon.hpp"
#include "riskopt/scenario.hpp"
#include "riskopt/solver.hpp"
#include "riskopt/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitVerify = 5;

struct CommonOpts {
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<double> mu, sigma, r, T, x, gamma, q, q_frac, eps, t;
    std::optional<std::string> kind, grid;
    std::optional<std::uint64_t> seed;
    bool dump_config = false;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--config", o.config_path, "scenario config file (key = value)");
    app->add_option("--out", o.out_path, "output file (CSV or record)");
    app->add_option("--mu", o.mu, "stock drift per year");
    app->add_option("--sigma", o.sigma, "stock volatility per year");
    app->add_option("--r", o.r, "riskless rate per year");
    app->add_option("--T", o.T, "horizon in years");
    app->add_option("--x", o.x, "initial wealth");
    app->add_option("--gamma", o.gamma, "relative risk aversion");
    app->add_option("--kind", o.kind, "unconstrained|var|el|eul|bond|stock");
    app->add_option("--q", o.q, "shortfall level (absolute)");
    app->add_option("--q-frac", o.q_frac, "shortfall level as fraction of x e^{rT}");
    app->add_option("--eps", o.eps, "constraint bound");
    app->add_option("--t", o.t, "evaluation time for curves");
    app->add_option("--grid", o.grid, "stock grid lo:hi:n");
    app->add_option("--seed", o.seed, "RNG seed");
    app->add_flag("--dump-config", o.dump_config, "print the resolved scenario and exit");
}

riskopt::ScenarioConfig resolve_scenario(const CommonOpts& o) {
    riskopt::ScenarioConfig cfg;
    if (o.config_path) cfg = riskopt::ScenarioConfig::from_file(*o.config_path);
    auto set = [&cfg](const char* key, const auto& opt) {
        if (opt) {
            std::ostringstream val;
            val.precision(17);
            val << *opt;
            cfg.apply(key, val.str(), std::string("--") + key);
        }
    };
    set("mu", o.mu);
    set("sigma", o.sigma);
    set("r", o.r);
    set("T", o.T);
    set("x", o.x);
    set("gamma", o.gamma);
    set("kind", o.kind);
    set("q", o.q);
    set("q_frac", o.q_frac);
    set("eps", o.eps);
    set("t", o.t);
    set("grid", o.grid);
    set("seed", o.seed);
    cfg.market();
    cfg.utility();
    cfg.constraint().validate();
    if (!(cfg.T > 0.0) || !(cfg.x > 0.0))
        throw std::invalid_argument("scenario: requires T > 0 and x > 0");
    if (!(cfg.t >= 0.0 && cfg.t < cfg.T))
        throw std::invalid_argument("scenario: requires 0 <= t < T");
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    return out;
}

void write_record(std::ostream& os, const riskopt::TerminalProfile& p,
                  double budget_resid, double constraint_resid) {
    os.precision(17);
    os << "kind = " << riskopt::to_string(p.kind) << "\n"
       << "y = " << p.y << "\n"
       << "y2 = " << p.y2 << "\n"
       << "h_lo = " << p.h_lo << "\n"
       << "h_hi = " << p.h_hi << "\n"
       << "q = " << p.q << "\n"
       << "q2 = " << p.q2() << "\n"
       << "binding = " << (p.binding() ? "true" : "false") << "\n"
       << "budget_residual = " << budget_resid << "\n"
       << "constraint_residual = " << constraint_resid << "\n";
}

int cmd_solve(const CommonOpts& o) {
    const riskopt::ScenarioConfig cfg = resolve_scenario(o);
    if (o.dump_config) {
        std::cout << cfg.serialize();
        return kExitOk;
    }
    const riskopt::MarketParams mkt = cfg.market();
    const riskopt::TerminalProfile p =
        riskopt::solve(mkt, cfg.T, cfg.x, cfg.utility(), cfg.constraint());
    const double budget_resid = riskopt::budget_value(p, mkt, cfg.T) - cfg.x;
    const bool constrained = p.kind == riskopt::ConstraintKind::VaR ||
                             p.kind == riskopt::ConstraintKind::EL ||
                             p.kind == riskopt::ConstraintKind::EUL;
    const double constraint_resid =
        constrained && p.binding()
            ? riskopt::constraint_value(p, mkt, cfg.T) - cfg.eps
            : 0.0;

    std::cout << std::setprecision(10);
    std::cout << "kind      " << riskopt::to_string(p.kind) << "\n"
              << "y         " << p.y << "\n"
              << "y2        " << p.y2 << "\n"
              << "h_lo      " << p.h_lo << "\n"
              << "h_hi      " << p.h_hi << "\n"
              << "q         " << p.q << "\n"
              << "q2        " << p.q2() << "\n"
              << "binding   " << (p.binding() ? "true" : "false") << "\n"
              << "budget residual     " << budget_resid << "\n"
              << "constraint residual " << constraint_resid << "\n";
    if (o.out_path) {
        std::ofstream out = open_out(*o.out_path);
        write_record(out, p, budget_resid, constraint_resid);
    }
    return kExitOk;
}

int cmd_curve(const CommonOpts& o, bool benchmarks) {
    const riskopt::ScenarioConfig cfg = resolve_scenario(o);
    const riskopt::MarketParams mkt = cfg.market();
    const riskopt::TerminalProfile p =
        riskopt::solve(mkt, cfg.T, cfg.x, cfg.utility(), cfg.constraint());
    const std::vector<riskopt::CurveSample> samples =
        riskopt::curve(p, mkt, cfg.T, cfg.t, cfg.grid.points());

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (o.out_path) {
        file = open_out(*o.out_path);
        os = &file;
    }
    os->precision(17);
    const double theta_n = mkt.kappa / (cfg.gamma * mkt.sigma);
    *os << "s,h,wealth,fraction,relative_exposure";
    if (benchmarks) *os << ",fraction_bond,fraction_stock,fraction_normal";
    *os << "\n";
    for (const riskopt::CurveSample& cs : samples) {
        *os << cs.s << "," << cs.h << "," << cs.wealth << "," << cs.fraction << ","
            << cs.relative_exposure;
        if (benchmarks) *os << ",0,1," << theta_n;
        *os << "\n";
    }
    return kExitOk;
}

int cmd_density(const CommonOpts& o) {
    const riskopt::ScenarioConfig cfg = resolve_scenario(o);
    const riskopt::MarketParams mkt = cfg.market();
    const riskopt::TerminalProfile p =
        riskopt::solve(mkt, cfg.T, cfg.x, cfg.utility(), cfg.constraint());
    const std::vector<double> grid = riskopt::default_wealth_grid(p, mkt, cfg.T);
    const riskopt::DensitySummary d = riskopt::terminal_density(p, mkt, cfg.T, grid);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (o.out_path) {
        file = open_out(*o.out_path);
        os = &file;
    }
    os->precision(17);
    *os << "w,pdf\n";
    for (const riskopt::DensityPiece& piece : d.pieces)
        for (const auto& [w, pdf] : piece.samples) *os << w << "," << pdf << "\n";

    // summary sidecar (atom, gap, mean); human-readable mean uses 4 decimals
    std::ostringstream rec;
    rec.precision(17);
    rec << "atom_mass = " << d.atom_mass << "\n"
        << "atom_point = " << d.atom_point << "\n";
    if (d.gap) rec << "gap_lo = " << d.gap->first << "\ngap_hi = " << d.gap->second << "\n";
    rec << "mean = " << d.mean << "\n"
        << "total_mass = " << d.total_mass() << "\n";
    if (o.out_path) {
        std::ofstream side = open_out(*o.out_path + ".summary");
        side << rec.str();
    }
    std::cerr << std::fixed << std::setprecision(4) << "mean " << d.mean << "  atom "
              << d.atom_mass << (d.gap ? "  gap (" + std::to_string(d.gap->first) + ", " +
                                             std::to_string(d.gap->second) + ")"
                                       : "")
              << "\n";
    return kExitOk;
}

int cmd_verify(const CommonOpts& o, double perturb_y) {
    const riskopt::ScenarioConfig cfg = resolve_scenario(o);
    const riskopt::VerifyReport rep = riskopt::run_verification(cfg, perturb_y);
    std::printf("%-22s %16s %16s %12s %8s  %s\n", "check", "closed", "estimate", "se", "z",
                "pass");
    for (const riskopt::VerifyRow& row : rep.rows)
        std::printf("%-22s %16.10f %16.10f %12.3e %8.2f  %s\n", row.name.c_str(),
                    row.closed, row.estimate, row.std_error, row.z,
                    row.pass ? "ok" : "FAIL");
    if (!rep.all_pass()) {
        std::cerr << "verification FAILED\n";
        return kExitVerify;
    }
    std::cout << "verification passed (" << rep.rows.size() << " checks)\n";
    return kExitOk;
}

int cmd_paper_report(const CommonOpts& o) {
    const riskopt::ScenarioConfig cfg = resolve_scenario(o);
    const riskopt::PaperReport rep = riskopt::build_paper_report(cfg);
    std::printf("%-30s %12s %12s  %-8s %s\n", "quantity", "reference", "computed",
                "verdict", "note");
    for (const riskopt::ReportRow& row : rep.rows) {
        std::printf("%-30s %12.4f %12.4f  %-8s %s\n", row.label.c_str(),
                    row.reference.value_or(0.0), row.computed, row.verdict.c_str(),
                    row.note.c_str());
    }
    if (o.out_path) {
        std::ofstream out = open_out(*o.out_path);
        out << "label,reference,computed,verdict\n";
        out.precision(17);
        for (const riskopt::ReportRow& row : rep.rows)
            out << row.label << "," << row.reference.value_or(0.0) << "," << row.computed
                << "," << row.verdict << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"terminal-wealth optimization under VaR / EL / EUL constraints"};
    app.require_subcommand(1);

    CommonOpts solve_opts, curve_opts, density_opts, verify_opts, report_opts;
    bool curve_benchmarks = false;
    double perturb_y = 1.0;

    add_common(app.add_subcommand("solve", "solve the static problem"), solve_opts);
    CLI::App* curve_cmd =
        app.add_subcommand("curve", "wealth/fraction curve at time t (CSV)");
    add_common(curve_cmd, curve_opts);
    curve_cmd->add_flag("--benchmarks", curve_benchmarks,
                        "append bond/stock/normal benchmark fraction columns");
    add_common(app.add_subcommand("density", "terminal wealth density (CSV + summary)"),
               density_opts);
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "closed forms vs Monte Carlo oracle suite");
    add_common(verify_cmd, verify_opts);
    verify_cmd->add_option("--perturb-y", perturb_y,
                           "test hook: scale the solved multiplier before checking")
        ->capture_default_str();
    add_common(app.add_subcommand("paper-report", "reproduction table for the published example"),
               report_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (app.got_subcommand("solve")) return cmd_solve(solve_opts);
        if (app.got_subcommand("curve")) return cmd_curve(curve_opts, curve_benchmarks);
        if (app.got_subcommand("density")) return cmd_density(density_opts);
        if (app.got_subcommand("verify")) return cmd_verify(verify_opts, perturb_y);
        if (app.got_subcommand("paper-report")) return cmd_paper_report(report_opts);
    } catch (const riskopt::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const riskopt::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
