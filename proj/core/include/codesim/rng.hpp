#pragma once

#include <cstdint>

namespace codesim {

// splitmix64. Chosen over std::mt19937_64 because the whole sequence is
// pinned by the algorithm itself, so identically-seeded runs reproduce
// bit-for-bit on any platform or implementation.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform-ish draw in [0, n). Plain modulo: the tiny bias is irrelevant
    // here and the result is trivially reproducible elsewhere.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace codesim
