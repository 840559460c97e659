#pragma once

#include <cstdint>

namespace swx {

// splitmix64, used both as a generator and to derive independent
// sub-seeds (per trial, per combined-algorithm child). Hand-rolled so
// that transcripts are identical across platforms and thread counts.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    uint64_t s = master ^ (0x5851f42d4c957f2dull * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {
        // warm up so that small seeds do not produce correlated leads
        splitmix64(state_);
        splitmix64(state_);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1) with 53 bits of precision
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    bool coin(double p) { return next_double() < p; }

    uint64_t below(uint64_t n) {
        // modulo with rejection to stay unbiased
        uint64_t limit = ~0ull - (~0ull % n);
        uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

private:
    uint64_t state_;
};

} // namespace swx
