#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace citysynth {

// splitmix64 finalizer; used both as the stream generator and to mix keys.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t key) {
    return mix64(seed ^ (key + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

// FNV-1a over a label, for fanning a master seed out to named stages.
inline uint64_t hash_label(uint64_t seed, std::string_view label) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return hash_combine(seed, h);
}

// Small counter-based generator. Deterministic across platforms and cheap to
// key per object, which keeps randomized stages independent of iteration
// order and thread count.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(mix64(seed)) {}
    Rng(uint64_t seed, uint64_t key) : state_(mix64(hash_combine(seed, key))) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n) { return n ? next() % n : 0; }

    // Standard normal via Box-Muller (one value per call; no cached state).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    uint64_t state_;
};

}  // namespace citysynth
