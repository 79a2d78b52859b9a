#pragma once

#include <cstdint>
#include <random>

namespace gbnet {

// splitmix64; used to derive independent per-stream seeds from a master
// seed so parallel workers get reproducible, order-independent streams.
inline std::uint64_t hash_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return std::mt19937_64(hash_mix(master_seed ^ hash_mix(stream_id)));
}

}  // namespace gbnet
