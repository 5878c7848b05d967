#pragma once
#include <stdexcept>
#include <string>

namespace riskopt {

// No payoff satisfying budget + risk constraint exists for the given inputs.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature or root-finder failed to converge within its iteration budget.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace riskopt
