#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace disclosure::checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Seeded property battery over every solver layer: distribution geometry,
/// feasibility oracles, structural-vs-LP value agreement, certificates,
/// best-response continuity, equilibrium existence, welfare identities, and
/// sweep determinism.  Deterministic for a fixed seed.
std::vector<CheckResult> run_all(std::uint64_t seed, int n_random);

}  // namespace disclosure::checks
