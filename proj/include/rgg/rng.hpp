// Counter-based pseudo-random generation for reproducible simulation.
//
// The generator is SplitMix64: output i of a stream with seed s is
// mix(s + (i+1)*GOLDEN). Being a pure function of (seed, counter) it is
// trivially splittable, so per-trial streams derived with derive_stream()
// are independent of scheduling order.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rgg {

inline constexpr std::uint64_t kSplitMixGolden = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stream seed for a numbered work unit (trial, retry, ...) under a master seed.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64_mix(master_seed + (index + 1) * kSplitMixGolden);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), counter_(0) {}

    std::uint64_t next_u64() { return splitmix64_mix(seed_ + (++counter_) * kSplitMixGolden); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [0, hi).
    double uniform(double hi) { return hi * next_double(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n == 0");
        // Rejection to remove modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    /// Poisson count: inversion below mean 30, PTRS transformed rejection above.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
        if (mean == 0.0) return 0;
        return mean < 30.0 ? poisson_inversion(mean) : poisson_ptrs(mean);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t poisson_inversion(double mean) {
        const double u = next_double();
        double p = std::exp(-mean);
        double cum = p;
        std::uint64_t k = 0;
        // mean < 30 so the tail beyond mean + 40*sigma is far below 2^-53.
        const std::uint64_t cap = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 16.0);
        while (u > cum && k < cap) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
        }
        return k;
    }

    // Hormann (1993), "The transformed rejection method for generating Poisson
    // random variables", algorithm PTRS.
    std::uint64_t poisson_ptrs(double mean) {
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            const double u = next_double() - 0.5;
            const double v = next_double();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            const double k = kf;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0)) {
                return static_cast<std::uint64_t>(kf);
            }
        }
    }

    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace rgg
