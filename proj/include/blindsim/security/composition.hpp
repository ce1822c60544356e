#pragma once

#include "blindsim/linalg/distance.hpp"

#include <cstdint>
#include <vector>

namespace blindsim::security {

struct CompositionTrial {
    std::uint64_t seed = 0;
    double epsilon = 0.0;       // measured closeness of the first construction
    double epsilon_prime = 0.0; // second construction
    double composed = 0.0;      // measured closeness of the composition
    bool pass = false;          // composed <= epsilon + epsilon' + 1e-9
};

struct CompositionOutcome {
    std::vector<CompositionTrial> trials;
    int failures = 0;
    double max_excess = -1.0; // max(composed - (eps + eps')), negative = slack

    bool all_pass() const { return failures == 0; }
};

// Serial composition: random single-qubit converters and resources with
// measured closeness eps = d(pi R, S sigma), eps' = d(pi' S, T sigma');
// asserts d(pi' pi R, T sigma' sigma) <= eps + eps' on a shared input family.
CompositionOutcome serial_composition_check(int trials, std::uint64_t seed, int family_size = 12);

// Parallel composition on tensor pairs: d(pi R (x) pi' R', S sigma (x) S' sigma')
// <= eps + eps'.
CompositionOutcome parallel_composition_check(int trials, std::uint64_t seed, int family_size = 8);

} // namespace blindsim::security
