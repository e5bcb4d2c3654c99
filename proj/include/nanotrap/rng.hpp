#pragma once

#include <cstdint>
#include <string_view>

// Counter-based deterministic random numbers. Values depend only on the
// (seed, counter) pair, never on call order, platform or thread count.
namespace nanotrap::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Stable FNV-1a hash of a purpose string, for deriving module sub-seeds.
inline std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Sub-seed for a module, independent across purpose strings.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
    return splitmix64(seed ^ hash_string(purpose));
}

/// Uniform double in [0,1) keyed by (seed, counter).
inline double uniform(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t v = splitmix64(splitmix64(seed) ^ (counter * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull));
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

} // namespace nanotrap::rng
