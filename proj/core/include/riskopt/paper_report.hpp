#pragma once
#include <optional>
#include <string>
#include <vector>

#include "riskopt/scenario.hpp"

namespace riskopt {

// One row of the reproduction table: a quantity reported by the reference
// study, the value this library computes for it, and the verdict.
struct ReportRow {
    std::string label;
    std::optional<double> reference; // value printed in the study
    double computed = 0.0;
    std::string verdict;             // "match" / "mismatch" / "flagged"
    std::string note;
};

struct PaperReport {
    std::vector<ReportRow> rows;
};

// Builds the full comparison table for the scenario (defaults to the
// published example: log utility, T = 15, q = 0.75 x e^{rT}, eps = 0.06).
// Rows whose reference values are internally inconsistent with the rest of
// the published example are marked "flagged", with oracle self-consistency
// (closed form vs MC within 3 SE) recorded in the note instead.
PaperReport build_paper_report(const ScenarioConfig& cfg);

} // namespace riskopt
