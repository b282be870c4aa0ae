#pragma once

#include <cstdint>
#include <limits>

namespace segcoal {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Child key of a hash-derived stream; used to give every word and every
// replicate its own independent generator.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label) {
    return mix64(parent ^ mix64(label + 0x632be59bd9b4e019ULL));
}

// SplitMix64 generator. Satisfies UniformRandomBitGenerator, so it can also
// drive std:: distributions where exactness across standard libraries is not
// required.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Uniform on [0, 1) with 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by Lemire's multiply-and-reject; exact and
// independent of the standard library.
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    __extension__ typedef unsigned __int128 U128;
    std::uint64_t x = rng();
    U128 m = static_cast<U128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = rng();
            m = static_cast<U128>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace segcoal
