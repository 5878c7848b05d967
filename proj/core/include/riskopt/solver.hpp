#pragma once
#include "riskopt/lognormal.hpp"
#include "riskopt/market.hpp"
#include "riskopt/profile.hpp"
#include "riskopt/utility.hpp"

namespace riskopt {

// Static variational solvers. Each returns a budget-binding TerminalProfile;
// infeasible inputs throw infeasible_error, non-convergence numerical_error.
TerminalProfile solve_unconstrained(const MarketParams& mkt, double T, double x,
                                    const UtilitySpec& util);
TerminalProfile solve_var(const MarketParams& mkt, double T, double x,
                          const UtilitySpec& util, double q, double eps);
TerminalProfile solve_el(const MarketParams& mkt, double T, double x,
                         const UtilitySpec& util, double q, double eps,
                         const QuadratureConfig& cfg = {});
TerminalProfile solve_eul(const MarketParams& mkt, double T, double x,
                          const UtilitySpec& util, double q, double eps);
TerminalProfile pure_bond_profile(const MarketParams& mkt, double T, double x);
TerminalProfile pure_stock_profile(const MarketParams& mkt, double T, double x);

// Dispatch on spec.kind.
TerminalProfile solve(const MarketParams& mkt, double T, double x,
                      const UtilitySpec& util, const ConstraintSpec& spec,
                      const QuadratureConfig& cfg = {});

// E[H_T xi(H_T)] -- the replication cost of the profile.
double budget_value(const TerminalProfile& p, const MarketParams& mkt, double T,
                    const QuadratureConfig& cfg = {});

// The profile's own risk functional: P(xi < q) for VaR, E[(xi-q)^-] for EL,
// E[(u(xi)-u(q))^-] for EUL.
double constraint_value(const TerminalProfile& p, const MarketParams& mkt, double T,
                        const QuadratureConfig& cfg = {});

// Risk functional of `kind` with level `q` evaluated on an arbitrary profile.
double shortfall_functional(const TerminalProfile& p, const MarketParams& mkt, double T,
                            ConstraintKind kind, double q,
                            const QuadratureConfig& cfg = {});

// Largest bound that still binds: the EL/EUL functional at the unconstrained
// optimum. Any eps >= eps_max reproduces the unconstrained solution.
double eps_max(const MarketParams& mkt, double T, double x, const UtilitySpec& util,
               double q, ConstraintKind kind, const QuadratureConfig& cfg = {});

// L1 = E[(q2 - xi) 1{xi <= q2}], L2 = E[H_T (q2 - xi) 1{xi <= q2}] with q2
// taken from whichever of (profile, benchmark) is the VaR solution.
LossReport loss_measures(const TerminalProfile& p, const TerminalProfile& benchmark,
                         const MarketParams& mkt, double T,
                         const QuadratureConfig& cfg = {});

// E[xi^j ; xi restricted to the part of branch b inside (wlo, whi)], helper
// shared with the density module. j in {0, 1}; weight_h multiplies by H.
double branch_expectation(const Branch& b, const LognormalLaw& law, double sub_lo,
                          double sub_hi, int xi_power, bool weight_h,
                          const QuadratureConfig& cfg = {});

// Largest h with xi(h) >= w on branch b (clamped to the branch interval).
double branch_h_where_below(const Branch& b, double w);

} // namespace riskopt
