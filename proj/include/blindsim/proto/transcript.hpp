#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace blindsim::proto {

struct TranscriptEvent {
    int round = 0;
    std::string sender; // "bob" | "alice"
    std::string kind;   // send_qubit | measure | bell_measure | correct | trap | flag | output
    std::string payload_hash;
    bool alice_private = false;
};

// Full port-level record of one protocol execution. Secrets (P, q, program,
// outcomes) only ever appear inside alice_private events.
struct Transcript {
    std::string protocol_variant; // "noverify" | "verify"
    std::uint64_t seed = 0;
    std::vector<TranscriptEvent> events;

    void add(const std::string& sender, const std::string& kind, const std::string& payload,
             bool alice_private);
    std::string to_jsonl() const; // one event per line
};

// The Bob-visible projection: only non-private structure (his own sends and
// their order); never program, input, outcomes, P, q or outputs.
struct BobView {
    std::vector<TranscriptEvent> events;
    std::string to_jsonl() const;
    bool operator==(const BobView& other) const;
};

BobView bob_view(const Transcript& t);

} // namespace blindsim::proto
