#pragma once
#include <string>
#include <vector>

#include "riskopt/scenario.hpp"

namespace riskopt {

struct VerifyRow {
    std::string name;
    double closed = 0.0;   // closed-form / quadrature value
    double estimate = 0.0; // MC or finite-difference side
    double std_error = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_pass() const {
        for (const VerifyRow& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

// Runs the oracle suite for one scenario: budget / constraint / mean /
// interval functionals against static MC (|z| <= 3), F(z,t) against
// conditional MC at several pins, and the reported fraction against the
// finite-difference delta identity (1e-4 relative). perturb_y != 1 rescales
// the solved multiplier before checking -- a sensitivity hook used by tests
// to confirm the suite actually rejects wrong solutions.
VerifyReport run_verification(const ScenarioConfig& cfg, double perturb_y = 1.0);

} // namespace riskopt
