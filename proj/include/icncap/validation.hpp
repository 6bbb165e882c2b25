#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace icncap {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast invariant checks over every module (a few seconds at most):
/// identities, metric properties, discovery monotonicity and minimality,
/// replay determinism and small Monte Carlo agreements.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, unsigned workers = 1);

}  // namespace icncap
