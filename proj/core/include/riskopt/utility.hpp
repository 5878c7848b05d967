#pragma once
#include <cmath>
#include <stdexcept>

namespace riskopt {

// CRRA utility family. gamma = 1 is handled as the exact log case
// throughout; solver logic only ever uses u differences, u' and I, so no
// gamma -> 1 limits are taken anywhere.
struct UtilitySpec {
    double gamma;

    static UtilitySpec make(double gamma) {
        if (!(gamma > 0.0))
            throw std::invalid_argument("UtilitySpec: gamma must be > 0");
        return UtilitySpec{gamma};
    }

    bool log_case() const { return gamma == 1.0; }

    double u(double z) const {
        if (!(z > 0.0)) throw std::invalid_argument("u: wealth must be > 0");
        if (log_case()) return std::log(z);
        return std::pow(z, 1.0 - gamma) / (1.0 - gamma);
    }

    double u_prime(double z) const {
        if (!(z > 0.0)) throw std::invalid_argument("u_prime: wealth must be > 0");
        if (log_case()) return 1.0 / z;
        return std::pow(z, -gamma);
    }

    // I = (u')^{-1}
    double inverse_marginal(double y) const {
        if (!(y > 0.0)) throw std::invalid_argument("inverse_marginal: argument must be > 0");
        if (log_case()) return 1.0 / y;
        return std::pow(y, -1.0 / gamma);
    }
};

} // namespace riskopt
