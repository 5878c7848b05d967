#include <doctest.h>

#include <cmath>
#include <random>

#include "riskopt/prehorizon.hpp"
#include "riskopt/solver.hpp"

using namespace riskopt;

namespace {
const MarketParams mkt = MarketParams::make(0.09, 0.20, 0.06);
const UtilitySpec log_u = UtilitySpec::make(1.0);
constexpr double T = 15.0;
constexpr double x0 = 1.0;
const double q_ref = 0.75 * std::exp(0.06 * 15.0);
constexpr double eps_ref = 0.06;

double fd_fraction(const TerminalProfile& p, double t, double z) {
    const QuadratureConfig cfg;
    const double dz = 1e-6 * z;
    const double up = wealth_and_fraction(p, mkt, T, t, z + dz, cfg).wealth;
    const double dn = wealth_and_fraction(p, mkt, T, t, z - dz, cfg).wealth;
    const double f = wealth_and_fraction(p, mkt, T, t, z, cfg).wealth;
    return -(mkt.kappa / mkt.sigma) * z * (up - dn) / (2.0 * dz) / f;
}
} // namespace

TEST_CASE("pre-horizon terms satisfy their defining relations") {
    for (double gamma : {1.0, 2.0, 0.7}) {
        for (double t : {0.0, 5.0, 14.9}) {
            const PreHorizonTerms pt = PreHorizonTerms::make(mkt, gamma, T, t);
            const double tau = T - t;
            CHECK(pt.a == doctest::Approx(-(0.06 + 0.5 * 0.15 * 0.15) * tau).epsilon(1e-14));
            CHECK(pt.b == doctest::Approx(-0.15 * std::sqrt(tau)).epsilon(1e-14));
            for (double u : {0.4, 1.0, 2.7}) {
                for (double z : {0.3, 1.0, 4.0}) {
                    CHECK(pt.d_wealth(u, z) - pt.d_price(u, z) ==
                          doctest::Approx(0.15 * std::sqrt(tau) / gamma).epsilon(1e-10));
                    CHECK(pt.c2(u, z) ==
                          doctest::Approx((std::log(u / z) - pt.a) / pt.b).epsilon(1e-12));
                }
            }
            if (gamma == 1.0) CHECK(pt.gamma_t == 0.0);
        }
    }
    CHECK_THROWS_AS(PreHorizonTerms::make(mkt, 1.0, T, T), std::invalid_argument);
    CHECK_THROWS_AS(PreHorizonTerms::make(mkt, 1.0, T, -0.5), std::invalid_argument);
}

TEST_CASE("unconstrained exposure is flat at the normal strategy") {
    const TerminalProfile p = solve_unconstrained(mkt, T, x0, log_u);
    for (double z : {0.2, 1.0, 3.0}) {
        const CurveSample cs = wealth_and_fraction(p, mkt, T, 5.0, z);
        CHECK(cs.relative_exposure == 1.0);
        CHECK(cs.fraction == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(cs.wealth == doctest::Approx(1.0 / z).epsilon(1e-14)); // e^Gamma = 1
    }
}

TEST_CASE("VaR wealth and exposure at reference pins") {
    const TerminalProfile p = solve_var(mkt, T, x0, log_u, q_ref, eps_ref);
    const CurveSample at1 = wealth_and_fraction_var(p, mkt, T, 5.0, 1.0);
    CHECK(at1.wealth == doctest::Approx(1.039145073208212).epsilon(1e-8));
    CHECK(at1.relative_exposure == doctest::Approx(0.8727627077437179).epsilon(1e-8));
    const CurveSample at06 = wealth_and_fraction_var(p, mkt, T, 5.0, 0.6);
    CHECK(at06.wealth == doctest::Approx(1.6315405376757495).epsilon(1e-8));
    CHECK(at06.relative_exposure == doctest::Approx(0.9224300500970148).epsilon(1e-8));
    CHECK(at1.fraction == doctest::Approx(0.75 * at1.relative_exposure).epsilon(1e-14));
}

TEST_CASE("VaR investor with eps = 1 behaves like the benchmark everywhere") {
    const TerminalProfile p = solve_var(mkt, T, x0, log_u, q_ref, 1.0);
    for (double z : {0.1, 0.5, 1.0, 2.0, 8.0}) {
        const CurveSample cs = wealth_and_fraction_var(p, mkt, T, 5.0, z);
        CHECK(cs.relative_exposure == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("VaR manager overshoots the normal strategy in cheap-stock states") {
    const TerminalProfile p = solve_var(mkt, T, x0, log_u, q_ref, eps_ref);
    // S in (0, 0.9282) maps to large H values
    bool exceeds = false;
    for (double s = 0.05; s < 0.9282; s += 0.02) {
        const double z = h_from_stock(mkt, 5.0, s);
        if (wealth_and_fraction_var(p, mkt, T, 5.0, z).fraction > 0.75) exceeds = true;
    }
    CHECK(exceeds);
}

TEST_CASE("EL wealth and exposure at reference pins") {
    const TerminalProfile p = solve_el(mkt, T, x0, log_u, q_ref, eps_ref);
    const CurveSample at1 = wealth_and_fraction_el(p, mkt, T, 5.0, 1.0);
    CHECK(at1.wealth == doctest::Approx(1.0393039019638983).epsilon(1e-7));
    CHECK(at1.relative_exposure == doctest::Approx(0.8480552166655962).epsilon(1e-7));
    const CurveSample far = wealth_and_fraction_el(p, mkt, T, 5.0, 1.6776);
    CHECK(far.wealth == doctest::Approx(0.6575490202632038).epsilon(1e-7));
    CHECK(far.relative_exposure == doctest::Approx(0.9525891185734491).epsilon(1e-7));
}

TEST_CASE("EL exposure never goes short and tends to the normal strategy") {
    const TerminalProfile p = solve_el(mkt, T, x0, log_u, q_ref, eps_ref);
    // the shifted worst branch (y1 h - y2)^{-1/g} is locally more elastic
    // than the unconstrained payoff, so the exposure may top the normal
    // strategy slightly in bad states; it never goes short
    for (double s : {0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 20.0}) {
        const double z = h_from_stock(mkt, 5.0, s);
        const double rel = wealth_and_fraction_el(p, mkt, T, 5.0, z).relative_exposure;
        CHECK(rel > 0.0);
        CHECK(rel < 1.15);
    }
    // deep in both tails the constraint becomes irrelevant
    for (double z : {1e-3, 1e3}) {
        const double rel = wealth_and_fraction_el(p, mkt, T, 5.0, z).relative_exposure;
        CHECK(rel == doctest::Approx(1.0).epsilon(2e-3));
    }
}

TEST_CASE("slack EL bound collapses the evaluator to the unconstrained form") {
    const double cap = eps_max(mkt, T, x0, log_u, q_ref, ConstraintKind::EL);
    const TerminalProfile p = solve_el(mkt, T, x0, log_u, q_ref, 1.5 * cap);
    for (double z : {0.3, 1.0, 2.5}) {
        const CurveSample cs = wealth_and_fraction_el(p, mkt, T, 5.0, z);
        CHECK(cs.wealth == doctest::Approx(1.0 / (p.y * z)).epsilon(1e-9));
        CHECK(cs.relative_exposure == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("EUL wealth and exposure at reference pins") {
    const TerminalProfile p = solve_eul(mkt, T, x0, log_u, q_ref, eps_ref);
    const CurveSample at1 = wealth_and_fraction_eul(p, mkt, T, 5.0, 1.0);
    CHECK(at1.wealth == doctest::Approx(1.0144125977507659).epsilon(1e-9));
    CHECK(at1.relative_exposure == doctest::Approx(0.9402600843179525).epsilon(1e-9));
}

TEST_CASE("EUL exposure stays inside the open unit band") {
    const TerminalProfile p = solve_eul(mkt, T, x0, log_u, q_ref, eps_ref);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uz(-4.0, 4.0), ut(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double z = std::exp(uz(rng));
        const double t = ut(rng) * (T - 1e-6);
        const double rel = wealth_and_fraction_eul(p, mkt, T, t, z).relative_exposure;
        CHECK(rel > 0.0);
        // deep tails saturate to exactly 1 in double precision once the
        // floor terms underflow; the strict bound is checked below
        CHECK(rel <= 1.0);
    }
    // strict bound where doubles still resolve the floor terms: the Phi
    // difference behind it underflows once |d| > ~8
    for (int i = 0; i < 2000; ++i) {
        const double z = p.h_lo * std::exp(1.5 * (uz(rng) / 4.0));
        const double t = ut(rng) * (T - 2.0);
        const double rel = wealth_and_fraction_eul(p, mkt, T, t, z).relative_exposure;
        CHECK(rel > 0.0);
        CHECK(rel < 1.0);
    }
}

TEST_CASE("EUL exposure limit pattern at the horizon") {
    const TerminalProfile p = solve_eul(mkt, T, x0, log_u, q_ref, eps_ref);
    const double t = T - 1e-8;
    CHECK(wealth_and_fraction_eul(p, mkt, T, t, 0.5 * p.h_lo).relative_exposure ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(wealth_and_fraction_eul(p, mkt, T, t, 2.0 * p.h_hi).relative_exposure ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(wealth_and_fraction_eul(p, mkt, T, t, 0.5 * (p.h_lo + p.h_hi))
              .relative_exposure == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(wealth_and_fraction_eul(p, mkt, T, t, p.h_lo).relative_exposure ==
          doctest::Approx(0.5).epsilon(1e-3));
    CHECK(wealth_and_fraction_eul(p, mkt, T, t, p.h_hi).relative_exposure ==
          doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("wealth converges to the terminal payoff near the horizon") {
    const TerminalProfile profiles[] = {
        solve_unconstrained(mkt, T, x0, log_u),
        solve_var(mkt, T, x0, log_u, q_ref, eps_ref),
        solve_el(mkt, T, x0, log_u, q_ref, eps_ref),
        solve_eul(mkt, T, x0, log_u, q_ref, eps_ref),
    };
    const QuadratureConfig cfg;
    for (const TerminalProfile& p : profiles) {
        for (double z : {0.25, 0.45, 1.4, 3.0}) {
            // stay away from the breakpoints where xi itself is kinked
            if (std::abs(z - p.h_lo) < 0.05 || std::abs(z - p.h_hi) < 0.05) continue;
            const double f = wealth_and_fraction(p, mkt, T, T - 1e-6, z, cfg).wealth;
            CHECK(f == doctest::Approx(p.value(z)).epsilon(1e-3));
        }
    }
}

TEST_CASE("initial wealth is recovered at t = 0") {
    const QuadratureConfig cfg;
    const TerminalProfile profiles[] = {
        solve_unconstrained(mkt, T, x0, log_u),
        solve_var(mkt, T, x0, log_u, q_ref, eps_ref),
        solve_el(mkt, T, x0, log_u, q_ref, eps_ref),
        solve_eul(mkt, T, x0, log_u, q_ref, eps_ref),
        pure_bond_profile(mkt, T, x0),
        pure_stock_profile(mkt, T, x0),
    };
    for (const TerminalProfile& p : profiles)
        CHECK(wealth_and_fraction(p, mkt, T, 0.0, 1.0, cfg).wealth ==
              doctest::Approx(x0).epsilon(1e-6));
}

TEST_CASE("reported fraction solves the replication identity") {
    const TerminalProfile profiles[] = {
        solve_var(mkt, T, x0, log_u, q_ref, eps_ref),
        solve_el(mkt, T, x0, log_u, q_ref, eps_ref),
        solve_eul(mkt, T, x0, log_u, q_ref, eps_ref),
        solve_var(mkt, T, x0, UtilitySpec::make(2.0), 1.5, 0.08),
        solve_eul(mkt, T, x0, UtilitySpec::make(2.0), 2.0, 0.005),
    };
    const QuadratureConfig cfg;
    for (const TerminalProfile& p : profiles) {
        for (double z : {0.3, 0.8, 1.0, 1.9}) {
            for (double t : {1.0, 5.0, 12.0}) {
                const double frac = wealth_and_fraction(p, mkt, T, t, z, cfg).fraction;
                CHECK(frac == doctest::Approx(fd_fraction(p, t, z)).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("benchmark wealth processes") {
    const QuadratureConfig cfg;
    const TerminalProfile bond = pure_bond_profile(mkt, T, x0);
    CHECK(wealth_and_fraction(bond, mkt, T, 5.0, 0.7, cfg).wealth ==
          doctest::Approx(x0 * std::exp(0.06 * 5.0)).epsilon(1e-12));
    CHECK(wealth_and_fraction(bond, mkt, T, 5.0, 0.7, cfg).fraction == 0.0);
    const TerminalProfile stock = pure_stock_profile(mkt, T, x0);
    const double z = h_from_stock(mkt, 5.0, 1.7);
    CHECK(wealth_and_fraction(stock, mkt, T, 5.0, z, cfg).wealth ==
          doctest::Approx(1.7 * x0).epsilon(1e-10));
    CHECK(wealth_and_fraction(stock, mkt, T, 5.0, z, cfg).fraction ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("curve sampling over a stock grid") {
    const TerminalProfile unc = solve_unconstrained(mkt, T, x0, log_u);
    const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
    const std::vector<CurveSample> cs = curve(unc, mkt, T, 5.0, grid);
    REQUIRE(cs.size() == 4);
    for (const CurveSample& c : cs)
        CHECK(c.fraction == doctest::Approx(0.75).epsilon(1e-13));
    // single-point grid equals the pointwise evaluation
    const std::vector<CurveSample> single = curve(unc, mkt, T, 5.0, {1.3});
    const double z13 = h_from_stock(mkt, 5.0, 1.3);
    CHECK(single.size() == 1);
    CHECK(single[0].wealth ==
          doctest::Approx(wealth_and_fraction(unc, mkt, T, 5.0, z13).wealth)
              .epsilon(1e-14));
    CHECK(single[0].s == 1.3);
    CHECK_THROWS_AS(curve(unc, mkt, T, 5.0, {1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(curve(unc, mkt, T, 5.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(curve(unc, mkt, T, T, {1.0}), std::invalid_argument);
}
