#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "riskopt/lognormal.hpp"
#include "riskopt/market.hpp"
#include "riskopt/profile.hpp"

namespace riskopt {

struct MCConfig {
    std::int64_t n_samples = 1'000'000;
    int n_steps = 1;          // rebalancing steps per path (replicate only)
    std::uint64_t seed = 1;
    bool antithetic = false;
};

struct MCReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    std::optional<double> target; // closed-form value when available
    double z_score = 0.0;         // (estimate - target)/std_error

    MCReport& against(double closed_form);
};

// Functional of the terminal wealth estimated by mc_static.
struct Functional {
    enum class Kind { Budget, Constraint, Mean, Interval, L1, L2 };
    Kind kind = Kind::Mean;
    double lo = 0.0, hi = 0.0; // Interval bounds
    double q2 = 0.0;           // L1/L2 threshold

    static Functional budget() { return {Kind::Budget, 0, 0, 0}; }
    static Functional constraint() { return {Kind::Constraint, 0, 0, 0}; }
    static Functional mean() { return {Kind::Mean, 0, 0, 0}; }
    static Functional interval(double lo, double hi) { return {Kind::Interval, lo, hi, 0}; }
    static Functional l1(double q2) { return {Kind::L1, 0, 0, q2}; }
    static Functional l2(double q2) { return {Kind::L2, 0, 0, q2}; }
};

// Samples H_T from its exact lognormal law and averages the functionals in
// one pass. Sampling is split into fixed-size chunks; chunk c uses an
// mt19937_64 engine seeded with splitmix64(seed + GOLDEN * (c + 1)), and the
// chunk partials are reduced in chunk order, so the estimate is identical
// regardless of how many worker threads run the chunks.
std::vector<MCReport> mc_static(const TerminalProfile& p, const MarketParams& mkt, double T,
                                const std::vector<Functional>& fns, const MCConfig& cfg);
MCReport mc_static(const TerminalProfile& p, const MarketParams& mkt, double T,
                   const Functional& fn, const MCConfig& cfg);

// E[(H_T/H_t) xi(H_T) | H_t = z] by sampling the bridge increment.
MCReport mc_conditional_wealth(const TerminalProfile& p, const MarketParams& mkt, double T,
                               double t, double z, const MCConfig& cfg);

// Simulates stock paths, trades the strategy's fraction at each of n_steps
// rebalance dates, and reports the RMS of (X_T - xi(H_T))/xi(H_T).
MCReport replicate(const TerminalProfile& p, const MarketParams& mkt, double T,
                   const MCConfig& cfg, const QuadratureConfig& qcfg = {1e-7, 1e-7, 2000});

} // namespace riskopt
