#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "plausigen/math.hpp"

namespace plausigen {

// Deterministic random source. All floating-point draws are derived from raw
// mt19937_64 output instead of std::uniform_real_distribution, whose results
// differ between standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) by rejection.
    uint64_t uniform_index(uint64_t n) {
        if (n == 0) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform point in the closed unit ball, by rejection from the cube.
    Vec3 in_unit_ball() {
        for (;;) {
            Vec3 v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
            if (norm2(v) <= 1.0) return v;
        }
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Stable seed derivation so any single generation job can be reproduced in
// isolation from (master seed, scene, type, camera index).
inline uint64_t derive_seed(uint64_t master, std::string_view a,
                            std::string_view b = {}, uint64_t index = 0) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    auto mix_str = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    mix_str(a);
    mix_str(b);
    h ^= detail::splitmix64(master);
    h ^= detail::splitmix64(index + 0x51ed2701);
    return detail::splitmix64(h);
}

}  // namespace plausigen
