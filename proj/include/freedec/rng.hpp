#pragma once

#include <cmath>
#include <cstdint>

namespace freedec {

/// Counter-based random generator built on the SplitMix64 output function.
///
/// Every draw is a pure function of (seed, stream, counter), so fills can run
/// in any order, in parallel, and still reproduce bit-identically. The i-th
/// word of the stream equals the i-th output of the standard SplitMix64
/// sequence whose state starts at the stream key; the stream key itself is
/// the stream-th output of SplitMix64 seeded with the user seed.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(word_at(seed, stream))
    {
    }

    std::uint64_t word(std::uint64_t counter) const { return word_at(key_, counter); }

    /// Uniform in the open interval (0, 1).
    double uniform(std::uint64_t counter) const
    {
        return (static_cast<double>(word(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on the counter pair (2c, 2c+1).
    double gaussian(std::uint64_t counter) const
    {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    static std::uint64_t word_at(std::uint64_t state, std::uint64_t index)
    {
        std::uint64_t z = state + (index + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

}  // namespace freedec
