#pragma once

#include <cstdint>

namespace horolab {

// Counter-based generator: every draw is a pure function of
// (seed, index, slot), so the stream does not depend on how work is split
// across threads.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ index);
    return splitmix64(h ^ (slot * 0xd1b54a32d192ed03ULL));
}

// Uniform double in [0,1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
    return static_cast<double>(counter_hash(seed, index, slot) >> 11) * 0x1.0p-53;
}

}  // namespace horolab
