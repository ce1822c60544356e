#pragma once

#include "blindsim/linalg/state.hpp"
#include "blindsim/mbqc/graph.hpp"

#include <random>
#include <vector>

namespace blindsim::proto {

enum class Role : unsigned char {
    Computation, // carries a resource-state qubit
    TrapX,       // |+>, tested with X
    TrapZ,       // |0>, tested with Z
};

// The secret permutation: N positions split into thirds, with the relative
// order of the computation positions preserved (slot k of the resource state
// sits at the k-th computation position).
class PermutationTag {
public:
    static PermutationTag from_roles(std::vector<Role> roles);
    // perm[slot] = position, slots ordered (computation..., trapX..., trapZ...).
    static PermutationTag from_permutation(int n, const std::vector<int>& perm);
    static PermutationTag sample(int n, std::mt19937_64& rng); // uniform over valid tags
    static std::vector<PermutationTag> enumerate_all(int n);

    int n() const { return static_cast<int>(roles_.size()); }
    Role role(int position) const { return roles_[static_cast<size_t>(position)]; }
    const std::vector<Role>& roles() const { return roles_; }
    std::vector<int> positions_of(Role r) const;
    // computation position of resource-qubit k (order preserving)
    int position_of_slot(int k) const;
    // inverse: resource-qubit index at a computation position
    int slot_of_position(int position) const;

private:
    explicit PermutationTag(std::vector<Role> roles) : roles_(std::move(roles)) {}
    std::vector<Role> roles_;
};

// P(|g> (x) |+>^{N/3} (x) |0>^{N/3}) with the resource qubits routed to the
// computation positions in order.
linalg::StateVector build_psi_p(const PermutationTag& tag, const mbqc::GraphSpec& g_graph);

} // namespace blindsim::proto
