#include "blindsim/proto/transcript.hpp"

#include "blindsim/util/random.hpp"

#include <json.hpp>

namespace blindsim::proto {

void Transcript::add(const std::string& sender, const std::string& kind, const std::string& payload,
                     bool alice_private) {
    TranscriptEvent ev;
    ev.round = static_cast<int>(events.size());
    ev.sender = sender;
    ev.kind = kind;
    ev.payload_hash = util::hash_hex(payload);
    ev.alice_private = alice_private;
    events.push_back(std::move(ev));
}

namespace {

std::string event_line(const TranscriptEvent& ev) {
    nlohmann::json j;
    j["round"] = ev.round;
    j["sender"] = ev.sender;
    j["kind"] = ev.kind;
    j["payload_hash"] = ev.payload_hash;
    j["alice_private"] = ev.alice_private;
    return j.dump();
}

} // namespace

std::string Transcript::to_jsonl() const {
    nlohmann::json header;
    header["variant"] = protocol_variant;
    header["seed"] = seed;
    std::string out = header.dump() + "\n";
    for (const auto& ev : events) out += event_line(ev) + "\n";
    return out;
}

BobView bob_view(const Transcript& t) {
    BobView v;
    for (const auto& ev : t.events)
        if (!ev.alice_private) v.events.push_back(ev);
    return v;
}

std::string BobView::to_jsonl() const {
    std::string out;
    for (const auto& ev : events) out += event_line(ev) + "\n";
    return out;
}

bool BobView::operator==(const BobView& other) const { return to_jsonl() == other.to_jsonl(); }

} // namespace blindsim::proto
