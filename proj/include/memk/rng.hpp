#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace memk {

// Deterministic random source. std::mt19937_64 is fully specified by the
// standard, and all transforms (uniform doubles, Box-Muller normals,
// bounded ints, Fisher-Yates) are implemented here instead of relying on
// std distributions, whose output differs across standard libraries.
// Same seed, same draw sequence, on every platform.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Box-Muller; consumes two uniforms per draw, the sine branch is unused.
    double normal(double mean, double stddev) {
        double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * 3.141592653589793238462643 * u2);
    }

    // Uniform in [0, n), rejection-sampled so the accept path is unbiased.
    uint64_t bounded(uint64_t n) {
        const uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; derives independent stream seeds from one run seed.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + stream * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace memk
