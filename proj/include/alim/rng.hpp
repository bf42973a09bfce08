#pragma once

#include <cstdint>
#include <random>

namespace alim {

// splitmix64; used to derive independent per-sample substreams from
// (corpus seed, sample index) so corruption can be evaluated in any order.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(mix64(mix64(seed) ^ index));
}

// Named streams let independent consumers (data order, mixup, init, ...)
// share one config seed without perturbing each other.
inline std::mt19937_64 named_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return std::mt19937_64(mix64(mix64(seed + 0x632be59bd9b4e019ULL) ^ mix64(stream_id)));
}

}  // namespace alim
