#pragma once

#include "blindsim/linalg/state.hpp"
#include "blindsim/mbqc/engine.hpp"

#include <map>
#include <set>
#include <vector>

namespace blindsim::mbqc {

// Incremental graph-state engine with byproduct-frame tracking. Vertices are
// created lazily, entangled by CZ, and measured in Z or in the XY plane with a
// declared flow successor. The engine maintains the invariant
//
//   live state = (tensor of X^x_v Z^z_v) |ideal>
//
// where |ideal> is the all-zero-outcome branch, so the recorded frames are
// exactly the accumulated byproduct. Frame updates:
//   entangle(a,b):      z_a ^= x_b, z_b ^= x_a
//   measure_z(v):       ideal outcome = raw ^ x_v; Z^out onto live neighbors
//   measure_xy(v,t,w):  physical angle (-1)^{x_v} t; ideal outcome = raw ^ z_v;
//                       X^out onto w, Z^out onto live neighbors of w except v.
class StreamingGraphEngine {
public:
    struct Frame {
        int x = 0;
        int z = 0;
    };

    void create(int id);
    void entangle(int a, int b);
    int measure_z(int id, OutcomeSource& src);                            // returns ideal outcome
    int measure_xy(int id, double theta, int successor, OutcomeSource& src);

    bool is_live(int id) const { return position_.count(id) > 0; }
    int live_count() const { return static_cast<int>(order_.size()); }
    Frame frame(int id) const;
    // Extracts the live state restricted to `ids` (must be all live vertices)
    // reordered as given.
    linalg::StateVector state_in_order(const std::vector<int>& ids) const;
    const std::vector<int>& raw_outcomes() const { return raw_outcomes_; }

private:
    int position_of(int id) const;
    void remove_from_register(int id, const linalg::CVector& post);

    linalg::CVector amps_ = linalg::CVector::Ones(1);
    std::vector<int> order_;                 // live ids, register order (MSB first)
    std::map<int, int> position_;            // id -> index in order_
    std::map<int, std::set<int>> adjacency_; // live graph structure
    std::map<int, Frame> frames_;
    std::vector<int> raw_outcomes_;
};

} // namespace blindsim::mbqc
