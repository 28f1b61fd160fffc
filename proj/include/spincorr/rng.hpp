#pragma once

#include <cstdint>

namespace spincorr {

// SplitMix64 (Steele/Lea/Vigna). Chosen over std::mt19937_64 because the
// output for a given seed is pinned by the algorithm itself, one finalizer
// doubles as the stream-splitting hash, and the state is a single word.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    uint64_t state_;
};

inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Independent per-stream seed for (master, index); streams can be consumed
// in any order or in parallel without changing the draws.
inline uint64_t derive_stream_seed(uint64_t master, uint64_t index) {
    return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

}  // namespace spincorr
