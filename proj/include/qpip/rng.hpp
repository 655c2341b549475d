// rng.hpp — seeded, portable random streams for coupling draws and fragment
// sampling.
//
// Everything downstream of a seed must be bit-reproducible across runs and
// across thread counts, so we pin one concrete generator (SplitMix64) instead
// of relying on unspecified standard-library distributions.  Independent
// child streams are derived by key chaining: each (purpose, realization,
// time index, draw index) tuple gets its own generator, which lets parallel
// workers sample "their" draws without sharing mutable state.
#pragma once

#include <cstdint>
#include <cmath>
#include <utility>

namespace qpip::rng {

// SplitMix64 (Steele, Lea & Flood): full 64-bit period, passes BigCrush,
// and is trivially portable because it is pure integer arithmetic.
struct SplitMix64 {
    std::uint64_t state{0};

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// Derive an independent child key by mixing one tag word into the parent key.
[[nodiscard]] constexpr std::uint64_t derive_key(std::uint64_t key,
                                                 std::uint64_t word) noexcept {
    SplitMix64 s{key};
    s.state = s.next() ^ word;
    return s.next();
}

// Variadic chaining: derive_key(k, a, b, c) == derive_key(derive_key(derive_key(k, a), b), c).
template <typename... Words>
[[nodiscard]] constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t word,
                                                 std::uint64_t next_word,
                                                 Words... rest) noexcept {
    return derive_key(derive_key(key, word), next_word, rest...);
}

// Stream tags.  Arbitrary fixed constants; they only need to be distinct.
inline constexpr std::uint64_t kCouplingStream = 0x01;
inline constexpr std::uint64_t kFragmentStream = 0x02;

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(SplitMix64& g) noexcept {
    return static_cast<double>(g.next() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) via bitmask rejection (no modulo bias).
inline std::uint64_t uniform_below(SplitMix64& g, std::uint64_t bound) noexcept {
    std::uint64_t mask = ~std::uint64_t{0};
    const std::uint64_t range = bound - 1;
    mask >>= __builtin_clzll(range | 1);
    std::uint64_t value;
    do {
        value = g.next() & mask;
    } while (value > range);
    return value;
}

// Pair of independent standard normals via the Marsaglia polar method.
// Chosen over Box-Muller to avoid trig calls; sqrt is correctly rounded by
// IEEE-754 so log is the only libm dependency in the seeded path.
inline std::pair<double, double> gaussian_pair(SplitMix64& g) noexcept {
    while (true) {
        const double u = 2.0 * uniform01(g) - 1.0;
        const double v = 2.0 * uniform01(g) - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        return {u * f, v * f};
    }
}

}  // namespace qpip::rng
