#pragma once
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "riskopt/utility.hpp"

namespace riskopt {

enum class ConstraintKind { Unconstrained, VaR, EL, EUL, PureBond, PureStock };

const char* to_string(ConstraintKind k);
ConstraintKind constraint_kind_from_string(const std::string& name);

// Which risk constraint applies, with its shortfall level q and bound eps
// (probability for VaR, wealth units for EL, utility units for EUL).
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::Unconstrained;
    double q = 0.0;
    double eps = 0.0;

    void validate() const {
        const bool needs_q = kind == ConstraintKind::VaR || kind == ConstraintKind::EL ||
                             kind == ConstraintKind::EUL;
        if (needs_q && !(q > 0.0))
            throw std::invalid_argument("ConstraintSpec: q must be > 0 for VaR/EL/EUL");
        if (needs_q && !(eps >= 0.0))
            throw std::invalid_argument("ConstraintSpec: eps must be >= 0");
        if (kind == ConstraintKind::VaR && eps > 1.0)
            throw std::invalid_argument("ConstraintSpec: VaR eps is a probability in [0,1]");
    }
};

// One monotone piece of the terminal wealth map on the H interval [lo, hi).
// PowerPiece:   xi(h) = coef * h^expo          (expo <= 0)
// FloorPiece:   xi(h) = level
// ShiftedPiece: xi(h) = (y1 h - y2)^(-1/gamma) (the EL worst branch)
struct PowerPiece {
    double coef, expo;
};
struct FloorPiece {
    double level;
};
struct ShiftedPiece {
    double y1, y2, gamma;
};

struct Branch {
    double lo, hi;
    std::variant<PowerPiece, FloorPiece, ShiftedPiece> piece;

    double value(double h) const {
        if (const auto* p = std::get_if<PowerPiece>(&piece))
            return p->expo == -1.0 ? p->coef / h : p->coef * std::pow(h, p->expo);
        if (const auto* f = std::get_if<FloorPiece>(&piece)) return f->level;
        const auto& s = std::get<ShiftedPiece>(piece);
        const double base = s.y1 * h - s.y2;
        return s.gamma == 1.0 ? 1.0 / base : std::pow(base, -1.0 / s.gamma);
    }
};

// Solved static problem: the total map h -> xi(h) plus its multipliers and
// breakpoints. h_lo == h_hi encodes a non-binding (or absent) constraint.
struct TerminalProfile {
    ConstraintKind kind = ConstraintKind::Unconstrained;
    double y = 0.0;    // y for VaR/unconstrained, y1 for EL/EUL
    double y2 = 0.0;   // 0 unless EL/EUL
    double h_lo = 1.0; // underline-h
    double h_hi = 1.0; // bar-h (= h_lo when non-binding)
    double q = 0.0;
    double gamma = 1.0;
    std::vector<Branch> branches; // ordered, covering (0, inf)

    bool binding() const { return h_lo < h_hi; }

    double value(double h) const {
        if (!(h > 0.0))
            throw std::invalid_argument("TerminalProfile::value: h must be > 0");
        for (const Branch& b : branches)
            if (h < b.hi) return b.value(h);
        return branches.back().value(h);
    }

    // Wealth level at the start of the worst branch: I(y hbar) when the VaR
    // constraint binds, q otherwise.
    double q2() const {
        if (kind != ConstraintKind::VaR) return q;
        if (!binding()) return q;
        return UtilitySpec{gamma}.inverse_marginal(y * h_hi);
    }
};

struct LossReport {
    double l1; // expected future-value loss below q2
    double l2; // expected present-value loss below q2
    double q2;
};

} // namespace riskopt
