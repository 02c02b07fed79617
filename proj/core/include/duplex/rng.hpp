#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace duplex {

/// Seeded random stream with platform-stable distributions.
///
/// std::mt19937_64 output is pinned by the standard, but the standard
/// distributions are not; every draw here goes through our own mapping so
/// renders reproduce byte-identically across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Independent child stream; `label` keeps sibling streams decorrelated.
    Rng child(std::string_view label) {
        std::uint64_t h = 1469598103934665603ull;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return Rng(splitmix64(state_hash() ^ h));
    }

    /// Stable per-item seed derivation (e.g. one stream per session).
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
        return splitmix64(master + 0x9e3779b97f4a7c15ull * (index + 1));
    }

private:
    std::uint64_t state_hash() {
        // consume one draw so child() calls advance the parent deterministically
        return splitmix64(engine_());
    }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace duplex
