#include "blindsim/mbqc/streaming.hpp"

#include "blindsim/linalg/qubit_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace blindsim::mbqc {

using linalg::CVector;
using linalg::StateVector;

void StreamingGraphEngine::create(int id) {
    if (position_.count(id)) throw std::invalid_argument("vertex already live");
    const int n = live_count();
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    amps_ = linalg::insert_qubit(amps_, n, n, plus);
    order_.push_back(id);
    position_[id] = n;
    adjacency_[id] = {};
    frames_[id] = Frame{};
}

int StreamingGraphEngine::position_of(int id) const {
    const auto it = position_.find(id);
    if (it == position_.end()) throw std::invalid_argument("vertex not live");
    return it->second;
}

void StreamingGraphEngine::entangle(int a, int b) {
    const int pa = position_of(a), pb = position_of(b);
    if (a == b) throw std::invalid_argument("self-edge");
    linalg::apply_cz(amps_, live_count(), pa, pb);
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
    frames_[a].z ^= frames_[b].x;
    frames_[b].z ^= frames_[a].x;
}

void StreamingGraphEngine::remove_from_register(int id, const CVector& post) {
    const int pos = position_[id];
    amps_ = post;
    const double norm = amps_.norm();
    if (norm < 1e-9) throw std::invalid_argument("zero-probability branch in streaming engine");
    amps_ /= norm;
    order_.erase(order_.begin() + pos);
    position_.erase(id);
    for (auto& [v, p] : position_)
        if (p > pos) --p;
    for (int nb : adjacency_[id]) adjacency_[nb].erase(id);
    adjacency_.erase(id);
    frames_.erase(id);
}

int StreamingGraphEngine::measure_z(int id, OutcomeSource& src) {
    const int pos = position_of(id);
    const int n = live_count();
    CVector ket0 = CVector::Zero(2);
    ket0(0) = 1.0;
    const CVector branch0 = linalg::project_out_qubit(amps_, n, pos, ket0);
    const double p0 = branch0.squaredNorm();
    const int raw = src.draw(p0);
    CVector post;
    if (raw == 0) {
        post = branch0;
    } else {
        CVector ket1 = CVector::Zero(2);
        ket1(1) = 1.0;
        post = linalg::project_out_qubit(amps_, n, pos, ket1);
    }
    const int ideal = raw ^ frames_[id].x;
    const auto neighbors = adjacency_[id];
    remove_from_register(id, post);
    if (ideal)
        for (int nb : neighbors) frames_[nb].z ^= 1;
    raw_outcomes_.push_back(raw);
    return ideal;
}

int StreamingGraphEngine::measure_xy(int id, double theta, int successor, OutcomeSource& src) {
    const int pos = position_of(id);
    if (!is_live(successor)) throw std::invalid_argument("flow successor not live");
    if (!adjacency_[id].count(successor)) throw std::invalid_argument("flow successor not adjacent");
    const int n = live_count();
    const double physical = (frames_[id].x ? -1.0 : 1.0) * theta;
    const CVector branch0 = linalg::project_out_qubit(amps_, n, pos, xy_basis_ket(physical, 0));
    const double p0 = branch0.squaredNorm();
    const int raw = src.draw(p0);
    CVector post = raw == 0 ? branch0 : linalg::project_out_qubit(amps_, n, pos, xy_basis_ket(physical, 1));
    const int ideal = raw ^ frames_[id].z;
    const auto succ_neighbors = adjacency_[successor];
    remove_from_register(id, post);
    if (ideal) {
        frames_[successor].x ^= 1;
        for (int nb : succ_neighbors)
            if (nb != id && position_.count(nb)) frames_[nb].z ^= 1;
    }
    raw_outcomes_.push_back(raw);
    return ideal;
}

StreamingGraphEngine::Frame StreamingGraphEngine::frame(int id) const {
    const auto it = frames_.find(id);
    if (it == frames_.end()) throw std::invalid_argument("vertex not live");
    return it->second;
}

StateVector StreamingGraphEngine::state_in_order(const std::vector<int>& ids) const {
    if (static_cast<int>(ids.size()) != live_count())
        throw std::invalid_argument("state extraction must cover all live vertices");
    const int n = live_count();
    CVector out = CVector::Zero(amps_.size());
    std::vector<int> pos(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) pos[i] = position_of(ids[i]);
    for (Eigen::Index idx = 0; idx < out.size(); ++idx) {
        std::uint64_t src = 0;
        for (int j = 0; j < n; ++j) {
            const int bit = static_cast<int>((static_cast<std::uint64_t>(idx) >> (n - 1 - j)) & 1);
            if (bit) src |= linalg::bit_mask(n, pos[static_cast<size_t>(j)]);
        }
        out(idx) = amps_(static_cast<Eigen::Index>(src));
    }
    return StateVector(std::move(out));
}

} // namespace blindsim::mbqc
