// rng.hpp
// Seeded random streams for reproducible sampling.

#pragma once

#include <cstdint>
#include <random>

namespace cfnet {

// splitmix64 step; mixes a 64-bit state into a well-distributed output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-trial seed from (master seed, trial index).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t state = master_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(state);
}

// Explicitly seeded uniform stream. uniform() maps the top 53 bits of the
// engine output onto [0, 1), so draws depend only on the (fully specified)
// mt19937_64 sequence and not on any library distribution implementation.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // uniform double in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // one draw, true with probability p
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace cfnet
