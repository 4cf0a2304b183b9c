/// Counter-based Gaussian streams. Every draw is a pure function of a
/// (seed, tag, counters...) key, so sampling is independent of iteration
/// order and truncation radius: the modes of an N=4 sample are exactly the
/// shared modes of the N=8 sample at the same seed.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace sns::rng {

inline constexpr uint64_t kSampleTag = 0x5a4d504cu;  // mu_nu field samples
inline constexpr uint64_t kNoiseTag = 0x4e4f4953u;   // Wiener increments
inline constexpr uint64_t kProbeTag = 0x50524f42u;   // probe paths

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_key(std::initializer_list<uint64_t> words) {
    uint64_t state = 0x243f6a8885a308d3ULL;  // arbitrary odd constant
    for (uint64_t w : words) state = splitmix64(state ^ w);
    return splitmix64(state);
}

inline uint64_t signed_word(int v) { return static_cast<uint64_t>(static_cast<int64_t>(v)); }

/// Two independent standard normals packed as re + i*im (Box-Muller).
/// E[g1^2] = E[g2^2] = 1, so E|result|^2 = 2.
inline std::complex<double> gauss_pair(std::initializer_list<uint64_t> key) {
    uint64_t state = 0x243f6a8885a308d3ULL;
    for (uint64_t w : key) state = splitmix64(state ^ w);
    const uint64_t b1 = splitmix64(state ^ 0x1ULL);
    const uint64_t b2 = splitmix64(state ^ 0x2ULL);
    // u1 in (0, 1], u2 in [0, 1)
    const double u1 = (static_cast<double>(b1 >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(b2 >> 11) * 0x1.0p-53;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

}  // namespace sns::rng
