#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace curvisynth {

/// SplitMix64 finalizer. Used to derive independent per-sample streams:
/// sample_seed(seed, i) = mix64(mix64(seed) ^ i). The seed is mixed before
/// the XOR so that small seeds do not share samples at permuted indices.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index)
{
    return mix64(mix64(seed) ^ index);
}

// The engine output sequence is fixed by the standard; the distributions
// are not, so every draw below is built directly on raw engine output to
// keep datasets byte-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi); returns lo when lo == hi.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        // Lemire-style rejection keeps the draw unbiased.
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) {
                return r % n;
            }
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(below(span));
    }

    bool bernoulli(double p) { return p > 0.0 && uniform01() < p; }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal()
    {
        double u1 = uniform01();
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace curvisynth
