#pragma once

#include <string>
#include <vector>

#include "skyfeel/config.hpp"

namespace skyfeel {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double elapsed_s = 0.0;
};

/// Runs the oracle suite: enumeration, grid-search, closed-form, and Monte
/// Carlo cross-checks of the analytic operations and solvers. All expected
/// values come from independent routes (brute force, recursion unrolling,
/// finite differences), never from the code paths under test.
std::vector<CheckResult> run_verification(const Config& config, unsigned threads = 0);

}  // namespace skyfeel
