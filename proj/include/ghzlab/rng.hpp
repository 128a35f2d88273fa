#pragma once

#include <cstdint>

namespace ghzlab {

/// SplitMix64. Small, counter-like and fully specified, so a (seed, index)
/// pair reproduces the same stream on every platform.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// +1 or -1 with equal probability.
    int sign() { return (next() >> 63) ? -1 : 1; }

private:
    std::uint64_t state_;
};

/// Seed of the independent stream for trial `index` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 outer(master);
    const std::uint64_t base = outer.next();
    SplitMix64 inner(base ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    return inner.next();
}

}  // namespace ghzlab
