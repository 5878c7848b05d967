#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "riskopt/lognormal.hpp"
#include "riskopt/market.hpp"
#include "riskopt/profile.hpp"

namespace riskopt {

// Law of the optimal terminal wealth: continuous pieces obtained by the
// monotone change of variables w = xi(h), a point mass where the profile is
// flat, and (binding VaR only) the gap interval (q2, q) of zero probability.
struct DensityPiece {
    double w_lo, w_hi;                            // wealth interval of the piece
    std::vector<std::pair<double, double>> samples; // (w, pdf(w)) on the grid
    double mass;                                   // exact probability of the piece
};

struct DensitySummary {
    std::vector<DensityPiece> pieces;
    double atom_mass = 0.0;  // probability mass at atom_point (0 if none)
    double atom_point = 0.0;
    std::optional<std::pair<double, double>> gap;
    double mean = 0.0;

    double total_mass() const {
        double acc = atom_mass;
        for (const DensityPiece& p : pieces) acc += p.mass;
        return acc;
    }
};

// Exact pdf of xi(H_T) at wealth w (continuous part only).
double terminal_pdf(const TerminalProfile& p, const MarketParams& mkt, double T, double w);

DensitySummary terminal_density(const TerminalProfile& p, const MarketParams& mkt, double T,
                                const std::vector<double>& wealth_grid,
                                const QuadratureConfig& cfg = {});

// P(xi in (lo, hi)), open interval; atoms at the endpoints excluded.
double interval_probability(const TerminalProfile& p, const MarketParams& mkt, double T,
                            double lo, double hi);

double expected_terminal_wealth(const TerminalProfile& p, const MarketParams& mkt, double T,
                                const QuadratureConfig& cfg = {});

// Log-spaced default grid used by the CLI: 2048 points over [1e-3 q, 20 q]
// (anchored at the pure-bond terminal wealth when the profile has no q).
std::vector<double> default_wealth_grid(const TerminalProfile& p, const MarketParams& mkt,
                                        double T, int n = 2048);

} // namespace riskopt
