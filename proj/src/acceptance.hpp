#pragma once

#include <string>
#include <vector>

#include "dynamics.hpp"

namespace epsol {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string summary;  // measured values and bounds, one line
};

namespace acceptance {

// Run the full verification suite. The options override the solver knobs for
// the per-epsilon solves; the RK4 order check always runs its own fixed step
// pair.
std::vector<CriterionResult> run(const SolveOptions& options);

} // namespace acceptance
} // namespace epsol
