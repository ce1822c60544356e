#pragma once

#include <stdexcept>
#include <vector>

namespace blindsim::proto {

// The one-way quantum channel resource. Qubit custody moves Bob -> Alice only;
// the Alice end exposes no operation that could carry information back, so the
// no-signaling constraint holds at the API surface.
class OneWayChannel {
public:
    class BobEnd {
    public:
        explicit BobEnd(OneWayChannel& ch) : ch_(ch) {}
        void send(int slot);

    private:
        OneWayChannel& ch_;
    };

    class AliceEnd {
    public:
        explicit AliceEnd(OneWayChannel& ch) : ch_(ch) {}
        bool has_pending() const;
        int receive(); // returns the slot id of the next delivered qubit

    private:
        OneWayChannel& ch_;
    };

    BobEnd bob_end() { return BobEnd(*this); }
    AliceEnd alice_end() { return AliceEnd(*this); }
    const std::vector<int>& log() const { return sent_; }

private:
    std::vector<int> sent_;
    std::size_t delivered_ = 0;
};

inline void OneWayChannel::BobEnd::send(int slot) { ch_.sent_.push_back(slot); }

inline bool OneWayChannel::AliceEnd::has_pending() const { return ch_.delivered_ < ch_.sent_.size(); }

inline int OneWayChannel::AliceEnd::receive() {
    if (!has_pending()) throw std::out_of_range("no pending qubit on the one-way channel");
    return ch_.sent_[ch_.delivered_++];
}

} // namespace blindsim::proto
