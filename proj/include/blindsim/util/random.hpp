#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace blindsim::util {

// splitmix64; used to derive independent per-trial seeds from a master seed so
// results do not depend on worker count.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

// Deterministic uniform double in [0, 1) from the engine's raw output.
double uniform01(std::mt19937_64& rng);

// FNV-1a over bytes; canonical hash used in transcripts and reports.
std::uint64_t fnv1a(const std::string& bytes);
std::string hash_hex(const std::string& bytes);

} // namespace blindsim::util
