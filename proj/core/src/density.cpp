#include "riskopt/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskopt/solver.hpp"

namespace riskopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Inverse of the branch map and |dh/dw| at wealth w (strictly monotone
// pieces only).
struct BranchInverse {
    double h;
    double dh_dw;
};

BranchInverse invert(const Branch& b, double w) {
    if (const auto* p = std::get_if<PowerPiece>(&b.piece)) {
        const double h = std::pow(w / p->coef, 1.0 / p->expo);
        return {h, std::abs(h / (p->expo * w))};
    }
    const auto& s = std::get<ShiftedPiece>(b.piece);
    const double h = (std::pow(w, -s.gamma) + s.y2) / s.y1;
    return {h, s.gamma * std::pow(w, -s.gamma - 1.0) / s.y1};
}

// Wealth range (w_min, w_max) attained on a strictly decreasing branch.
std::pair<double, double> wealth_range(const Branch& b) {
    const double at_lo = b.lo == 0.0 ? kInf : b.value(b.lo);
    const double at_hi = std::isinf(b.hi) ? 0.0 : b.value(b.hi);
    return {at_hi, at_lo};
}
} // namespace

double terminal_pdf(const TerminalProfile& p, const MarketParams& mkt, double T, double w) {
    if (!(w > 0.0)) return 0.0;
    const LognormalLaw law = state_price_law(mkt, T);
    double acc = 0.0;
    for (const Branch& b : p.branches) {
        if (std::holds_alternative<FloorPiece>(b.piece)) continue;
        if (!(b.lo < b.hi)) continue;
        const auto [w_min, w_max] = wealth_range(b);
        if (!(w > w_min && w < w_max)) continue;
        const BranchInverse inv = invert(b, w);
        acc += law.pdf(inv.h) * inv.dh_dw;
    }
    return acc;
}

DensitySummary terminal_density(const TerminalProfile& p, const MarketParams& mkt, double T,
                                const std::vector<double>& wealth_grid,
                                const QuadratureConfig& cfg) {
    DensitySummary out;
    const LognormalLaw law = state_price_law(mkt, T);

    for (const Branch& b : p.branches) {
        if (!(b.lo < b.hi)) continue;
        const double mass = partial_power_expectation(law, 0.0, b.lo == 0.0 ? 0.0 : b.lo,
                                                      b.hi);
        if (const auto* fl = std::get_if<FloorPiece>(&b.piece)) {
            out.atom_mass += mass;
            out.atom_point = fl->level;
            continue;
        }
        DensityPiece piece;
        const auto [w_min, w_max] = wealth_range(b);
        piece.w_lo = w_min;
        piece.w_hi = w_max;
        piece.mass = mass;
        auto sample_at = [&](double w) {
            const BranchInverse inv = invert(b, w);
            piece.samples.emplace_back(w, law.pdf(inv.h) * inv.dh_dw);
        };
        // one-sided boundary values keep trapezoids over the samples exact
        // and let plots draw the edges of each branch
        if (w_min > 0.0 && std::isfinite(w_min)) sample_at(w_min * (1.0 + 1e-12));
        for (double w : wealth_grid)
            if (w > w_min && w < w_max) sample_at(w);
        if (std::isfinite(w_max)) sample_at(w_max * (1.0 - 1e-12));
        out.pieces.push_back(std::move(piece));
    }

    if (p.kind == ConstraintKind::VaR && p.binding())
        out.gap = std::make_pair(p.q2(), p.q);
    out.mean = expected_terminal_wealth(p, mkt, T, cfg);
    return out;
}

double interval_probability(const TerminalProfile& p, const MarketParams& mkt, double T,
                            double lo, double hi) {
    if (!(lo >= 0.0) || !(lo < hi))
        throw std::invalid_argument("interval_probability: requires 0 <= lo < hi");
    const LognormalLaw law = state_price_law(mkt, T);
    double acc = 0.0;
    for (const Branch& b : p.branches) {
        if (!(b.lo < b.hi)) continue;
        if (const auto* fl = std::get_if<FloorPiece>(&b.piece)) {
            if (fl->level > lo && fl->level < hi)
                acc += partial_power_expectation(law, 0.0, b.lo, b.hi);
            continue;
        }
        // {h : lo < xi(h) < hi} on a strictly decreasing piece
        const double h_above = branch_h_where_below(b, hi); // xi < hi beyond this h
        const double h_below = branch_h_where_below(b, lo); // xi < lo beyond this h
        if (h_above < h_below)
            acc += partial_power_expectation(law, 0.0, h_above, h_below);
    }
    return acc;
}

double expected_terminal_wealth(const TerminalProfile& p, const MarketParams& mkt, double T,
                                const QuadratureConfig& cfg) {
    const LognormalLaw law = state_price_law(mkt, T);
    double acc = 0.0;
    for (const Branch& b : p.branches)
        acc += branch_expectation(b, law, 0.0, kInf, 1, false, cfg);
    return acc;
}

std::vector<double> default_wealth_grid(const TerminalProfile& p, const MarketParams& mkt,
                                        double T, int n) {
    if (n < 2) throw std::invalid_argument("default_wealth_grid: n must be >= 2");
    const double anchor = p.q > 0.0 ? p.q : std::exp(mkt.r * T);
    const double lo = 1e-3 * anchor, hi = 20.0 * anchor;
    std::vector<double> grid(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid[i] = lo * std::exp(step * i);
    return grid;
}

} // namespace riskopt
