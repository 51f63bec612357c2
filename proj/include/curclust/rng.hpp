#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace curclust {

using RandomStream = std::mt19937_64;

/// Derives an independently seeded stream from a master seed and up to three
/// context values (e.g. rank and trial index), so that concurrent workers get
/// reproducible, non-overlapping randomness.
inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                                  std::uint64_t c = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c),    static_cast<std::uint32_t>(c >> 32)};
    return RandomStream(seq);
}

/// Uniform double in [0, 1) from the top 53 bits of the stream. Hand-rolled so
/// output does not depend on the standard library's distribution internals.
inline double uniform01(RandomStream& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(RandomStream& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

/// Standard normal via Box-Muller.
inline double standard_normal(RandomStream& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

}  // namespace curclust
