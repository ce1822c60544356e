#pragma once

#include "blindsim/mbqc/streaming.hpp"
#include "blindsim/proto/permutation.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace blindsim::proto {

// Public layout of the preparation resource for N positions. Every position
// gets a pendant wire into its kept output qubit; if the resource graph has
// edges, a tapped double-rail runs along the positions so a measured chain of
// even length can fuse any ordered pair of outputs into a cluster edge. The
// layout depends only on (N, resource shape), never on the secret permutation.
//
// Per position i:   pend(i) - out(i),   out(i) - t(i) - r(i),
//                   out(i) - tp(i) - rp(i-1)
// Rail cell i:      r(i) - rp(i);  link pair  rp(i) - l(i) - lp(i) - r(i+1)
struct ResourceLayout {
    int n = 0;
    bool rails = false;

    int out(int i) const { return i; }
    int pend(int i) const { return n + i; }
    int tap(int i) const { return 2 * n + i; }      // exists for i < n-1
    int tap_exit(int i) const { return 3 * n + i; } // exists for i >= 1
    int rail(int i) const { return 4 * n + i; }     // cells i < n-1
    int rail2(int i) const { return 5 * n + i; }
    int link(int i) const { return 6 * n + i; }     // pairs i < n-2
    int link2(int i) const { return 7 * n + i; }

    bool exists(int id) const;
    std::vector<int> adjacency(int id) const;
    // Qubits Bob sends during preparation, in their public send order.
    std::vector<int> send_order() const;
    // send order followed by the kept outputs; the register convention for an
    // explicitly supplied adversarial resource state.
    std::vector<int> register_order() const;
    int sent_count() const { return static_cast<int>(send_order().size()); }
};

ResourceLayout resource_layout(int n, const mbqc::GraphSpec& g_graph);

// Alice's secret steering choices: one entry per sent qubit.
struct SteeringStep {
    int vertex = 0;
    bool xy = false;    // false: Z carve; true: XY(0) with flow successor
    int successor = -1; // only when xy
};

struct SteeringScript {
    std::vector<SteeringStep> steps; // carve-first evaluation order
};

// Requires a path-shaped resource graph (edges between consecutive indices).
SteeringScript steering_script(const ResourceLayout& layout, const PermutationTag& tag,
                               const mbqc::GraphSpec& g_graph);

struct Phase1Result {
    linalg::StateVector bob_state; // kept outputs, position order
    mbqc::ByproductFrame q;        // accumulated byproduct per position
    std::vector<int> raw_outcomes; // indexed like script steps
};

// Streams the honest preparation: lazy vertex creation, Alice measuring each
// sent qubit per the script. Exact for any outcome branch.
Phase1Result run_phase1_honest(const ResourceLayout& layout, const SteeringScript& script,
                               mbqc::OutcomeSource& src);

// GF(2) byproduct map q = M * raw over uniform raw outcome bits.
struct QByproductMap {
    int positions = 0;
    int raw_bits = 0;
    std::vector<std::uint64_t> x_rows; // mask over raw bits, per position
    std::vector<std::uint64_t> z_rows;

    // Distinct (x,z) patterns on the selected positions; uniformly weighted.
    std::vector<std::vector<std::pair<int, int>>> support_on(const std::vector<int>& positions) const;
};

QByproductMap phase1_q_map(const ResourceLayout& layout, const SteeringScript& script);

} // namespace blindsim::proto
