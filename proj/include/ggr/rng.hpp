#pragma once

#include <cstdint>
#include <initializer_list>

namespace ggr {

/// Self-contained SplitMix64 generator.  The standard <random> engines are
/// portable, but the distributions are not; every draw in this project goes
/// through this class so that identically seeded runs produce byte-identical
/// output on any platform or standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound).  Lemire multiply-shift with rejection,
    /// unbiased for any bound > 0.
    uint64_t next_below(uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            const uint64_t threshold = -bound % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

private:
    uint64_t state_;
};

/// Derive a child seed from a parent seed and an integer tag.  Used for the
/// hierarchical split master -> per-scheme -> per-scenario -> per-trial; the
/// chain is documented in the README so any trial can be re-run in isolation.
inline uint64_t derive_seed(uint64_t parent, uint64_t tag) {
    Rng g(parent ^ 0xA0761D6478BD642Full * (tag + 1));
    g.next_u64();
    return g.next_u64();
}

inline uint64_t derive_seed(uint64_t parent, std::initializer_list<uint64_t> path) {
    uint64_t s = parent;
    for (uint64_t tag : path)
        s = derive_seed(s, tag);
    return s;
}

} // namespace ggr
