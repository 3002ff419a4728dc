#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pdecrl {

/// Counter-based seed splitting. Every component derives its own stream from
/// the single run seed and a label, so adding a consumer never perturbs the
/// draws of any other.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Stream seed for (run seed, component label, counter).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t counter = 0) {
    return splitmix64(master ^ splitmix64(fnv1a(label) + counter));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::string_view label, std::uint64_t counter = 0) {
    return Rng(derive_seed(master, label, counter));
}

} // namespace pdecrl
