#pragma once

#include <cmath>
#include <cstdint>

namespace rlsq {

// SplitMix64 finalizer. Used as a counter-based generator: the k-th output
// of a stream is mix64(seed + (k+1)*GOLDEN), so draws depend only on
// (seed, k) and are identical across platforms and runs.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based random stream (SplitMix64).
///
/// Same seed, same call sequence, same bits. std:: distributions are
/// deliberately avoided: their output is implementation defined.
class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// Independent stream derived from a base seed and a stream tag.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return mix64(seed + kGolden * mix64(stream + kGolden));
    }

    std::uint64_t next_u64() { return mix64(seed_ + kGolden * (++counter_)); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] so log is finite
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rlsq
