#pragma once
// Randomised property checks behind `tfhnn verify` and the acceptance suite.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tfhnn {

struct PropertyTally {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst = 0.0;      // largest observed error
    double tolerance = 0.0;  // pass threshold on that error

    bool ok() const noexcept { return checks > 0 && failures == 0; }
};

// Each linearized model vs its unified polynomial, on `cases` random
// hypergraphs (n <= 30, m <= 20, sizes 2..6), L in 1..5, gamma in {.1,.3,.5}.
// AllDeepSets always runs with gamma = 0. Relative Frobenius error <= 1e-9.
PropertyTally check_unification(std::size_t cases, std::uint64_t seed);

// Off-diagonal support of the materialised operator vs breadth-first L-hop
// neighbourhoods, exact, for L in 1..3.
PropertyTally check_receptive_field(std::size_t cases, std::uint64_t seed);

// propagate(L=500, alpha=0.3) vs the closed-form limit on random instances
// (n <= 50, d = 8), relative Frobenius error <= 1e-6.
PropertyTally check_oversmoothing_limit(std::size_t cases, std::uint64_t seed);

// Energy at the L=500 output never exceeds the energy of random probes.
PropertyTally check_energy_minimum(std::size_t instances, std::size_t probes, std::uint64_t seed);

// Recurrence vs materialised operator times X, relative error <= 1e-12, for
// n <= 50, L <= 10, alpha in {0, .3, .7}.
PropertyTally check_recurrence(std::size_t cases, std::uint64_t seed);

std::vector<PropertyTally> verify_all(std::size_t cases, std::uint64_t seed);

}  // namespace tfhnn
