#include "blindsim/proto/permutation.hpp"

#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/mbqc/engine.hpp"
#include "blindsim/util/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace blindsim::proto {

using linalg::CVector;
using linalg::StateVector;

PermutationTag PermutationTag::from_roles(std::vector<Role> roles) {
    const int n = static_cast<int>(roles.size());
    if (n == 0 || n % 3 != 0) throw std::invalid_argument("position count must be a positive multiple of 3");
    int comp = 0, tx = 0, tz = 0;
    for (Role r : roles) {
        if (r == Role::Computation) ++comp;
        else if (r == Role::TrapX) ++tx;
        else ++tz;
    }
    if (comp != n / 3 || tx != n / 3 || tz != n / 3)
        throw std::invalid_argument("each role must occupy exactly a third of the positions");
    return PermutationTag(std::move(roles));
}

PermutationTag PermutationTag::from_permutation(int n, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation size mismatch");
    if (n % 3 != 0) throw std::invalid_argument("position count must be a multiple of 3");
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[static_cast<size_t>(p)]) throw std::invalid_argument("not a permutation");
        seen[static_cast<size_t>(p)] = true;
    }
    const int third = n / 3;
    // order preservation of the computation block
    for (int k = 0; k + 1 < third; ++k)
        if (perm[static_cast<size_t>(k)] >= perm[static_cast<size_t>(k + 1)])
            throw std::invalid_argument("permutation must keep the computation qubits in order");
    std::vector<Role> roles(static_cast<size_t>(n), Role::TrapZ);
    for (int k = 0; k < third; ++k) roles[static_cast<size_t>(perm[static_cast<size_t>(k)])] = Role::Computation;
    for (int k = third; k < 2 * third; ++k) roles[static_cast<size_t>(perm[static_cast<size_t>(k)])] = Role::TrapX;
    return from_roles(std::move(roles));
}

PermutationTag PermutationTag::sample(int n, std::mt19937_64& rng) {
    if (n % 3 != 0 || n <= 0) throw std::invalid_argument("position count must be a positive multiple of 3");
    std::vector<Role> pool;
    for (int i = 0; i < n / 3; ++i) {
        pool.push_back(Role::Computation);
        pool.push_back(Role::TrapX);
        pool.push_back(Role::TrapZ);
    }
    // Fisher-Yates with the deterministic uniform helper
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(util::uniform01(rng) * (i + 1));
        std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(std::min(j, i))]);
    }
    return from_roles(std::move(pool));
}

std::vector<PermutationTag> PermutationTag::enumerate_all(int n) {
    if (n % 3 != 0) throw std::invalid_argument("position count must be a multiple of 3");
    std::vector<Role> roles(static_cast<size_t>(n));
    std::vector<PermutationTag> out;
    // lexicographic enumeration of role strings with fixed multiplicities
    std::vector<Role> sorted;
    for (int i = 0; i < n / 3; ++i) sorted.push_back(Role::Computation);
    for (int i = 0; i < n / 3; ++i) sorted.push_back(Role::TrapX);
    for (int i = 0; i < n / 3; ++i) sorted.push_back(Role::TrapZ);
    std::sort(sorted.begin(), sorted.end());
    do {
        out.push_back(from_roles(sorted));
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return out;
}

std::vector<int> PermutationTag::positions_of(Role r) const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
        if (roles_[static_cast<size_t>(i)] == r) out.push_back(i);
    return out;
}

int PermutationTag::position_of_slot(int k) const {
    const auto comp = positions_of(Role::Computation);
    if (k < 0 || k >= static_cast<int>(comp.size())) throw std::invalid_argument("slot out of range");
    return comp[static_cast<size_t>(k)];
}

int PermutationTag::slot_of_position(int position) const {
    const auto comp = positions_of(Role::Computation);
    for (size_t k = 0; k < comp.size(); ++k)
        if (comp[k] == position) return static_cast<int>(k);
    throw std::invalid_argument("position is not a computation position");
}

StateVector build_psi_p(const PermutationTag& tag, const mbqc::GraphSpec& g_graph) {
    const int n = tag.n();
    if (g_graph.vertex_count != n / 3) throw std::invalid_argument("resource graph must have N/3 vertices");
    const StateVector g = mbqc::build_cluster(g_graph);

    // slot order: computation block, then |+> traps, then |0> traps
    CVector amps = g.amplitudes();
    int qubits = g_graph.vertex_count;
    CVector plus(2), zero(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    zero << 1.0, 0.0;
    for (int i = 0; i < n / 3; ++i) {
        amps = linalg::insert_qubit(amps, qubits, qubits, plus);
        ++qubits;
    }
    for (int i = 0; i < n / 3; ++i) {
        amps = linalg::insert_qubit(amps, qubits, qubits, zero);
        ++qubits;
    }

    // route slot k to its position: perm[position] = slot
    std::vector<int> perm(static_cast<size_t>(n));
    int next_tx = n / 3, next_tz = 2 * n / 3;
    for (int pos = 0; pos < n; ++pos) {
        switch (tag.role(pos)) {
            case Role::Computation: perm[static_cast<size_t>(pos)] = tag.slot_of_position(pos); break;
            case Role::TrapX: perm[static_cast<size_t>(pos)] = next_tx++; break;
            case Role::TrapZ: perm[static_cast<size_t>(pos)] = next_tz++; break;
        }
    }
    return StateVector(linalg::permute_qubits(amps, n, perm));
}

} // namespace blindsim::proto
