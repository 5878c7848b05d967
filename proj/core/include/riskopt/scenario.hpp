#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "riskopt/market.hpp"
#include "riskopt/mc.hpp"
#include "riskopt/profile.hpp"
#include "riskopt/utility.hpp"

namespace riskopt {

struct GridSpec {
    double lo = 0.05;
    double hi = 5.0;
    int n = 200;

    std::vector<double> points() const;
    static GridSpec parse(const std::string& text); // "lo:hi:n"
};

// One scenario = one flat key=value file ('#' starts a comment). Defaults
// reproduce the Table-1 setup: log investor, T = 15, x = 1, q = 0.75 x e^{rT},
// eps = 0.06.
struct ScenarioConfig {
    double mu = 0.09;
    double sigma = 0.20;
    double r = 0.06;
    double T = 15.0;
    double x = 1.0;
    double gamma = 1.0;
    ConstraintKind kind = ConstraintKind::VaR;
    std::optional<double> q_abs;  // absolute shortfall level, overrides q_frac
    double q_frac = 0.75;         // fraction of the pure-bond terminal wealth
    double eps = 0.06;
    double t = 5.0;               // evaluation time for curves
    GridSpec grid;
    std::int64_t mc_samples = 1'000'000;
    int mc_steps = 512;
    std::uint64_t seed = 12345;
    bool antithetic = false;

    static ScenarioConfig from_file(const std::string& path);
    static ScenarioConfig from_stream(std::istream& in, const std::string& name = "<config>");

    // Applies "key = value"; throws std::invalid_argument on unknown keys or
    // malformed values, citing file:line.
    void apply(const std::string& key, const std::string& value,
               const std::string& where);

    std::string serialize() const;

    double resolved_q() const {
        return q_abs ? *q_abs : q_frac * x * std::exp(r * T);
    }
    MarketParams market() const { return MarketParams::make(mu, sigma, r); }
    UtilitySpec utility() const { return UtilitySpec::make(gamma); }
    ConstraintSpec constraint() const { return ConstraintSpec{kind, resolved_q(), eps}; }
    MCConfig mc() const { return MCConfig{mc_samples, mc_steps, seed, antithetic}; }
};

} // namespace riskopt
