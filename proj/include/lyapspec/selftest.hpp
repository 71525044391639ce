#pragma once

#include <string>
#include <vector>

namespace lyapspec {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The invariant battery across the built-in models: symbolic counting,
// cylinder geometry, pressure brackets and convexity, Legendre duality,
// Gibbs identities, sampler determinism, and cover-count certificates.
std::vector<CheckResult> run_selftest();

}  // namespace lyapspec
