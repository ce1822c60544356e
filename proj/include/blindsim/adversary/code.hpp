#pragma once

#include <vector>

namespace blindsim::adversary {

// Abstract distance-d code at the combinatorial tier: the logical value flips
// only when at least `distance` of the listed computation slots are touched.
struct CodeConfig {
    int distance = 1;
    std::vector<int> logical_slots; // computation-slot indices, 0-based

    void validate(int computation_slots) const;
    bool logical_flipped(int touched_logical_slots) const { return touched_logical_slots >= distance; }

    static CodeConfig tier_a(int computation_slots); // d = 1, every slot logical
    static CodeConfig repetition(int distance, int computation_slots);
};

// (2/3)^(d/3)
double undetected_error_bound(int distance);

} // namespace blindsim::adversary
